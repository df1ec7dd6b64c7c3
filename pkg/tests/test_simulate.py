import numpy as np
import pytest

from rwig.contact_graph import ContactGraph
from rwig.markov import StateVector, TransitionMatrix, WalkerEnsemble
from rwig.pmf import full_distribution
from rwig.simulate import (
    ContactSequence,
    clique_count_distribution,
    clique_size_distribution,
    empirical_distribution,
    histogram_from_csv,
    histogram_to_csv,
    mean_clique_size,
    replica_seed,
    sample_sequence,
    sequence_to_jsonl,
    snapshots_from_jsonl,
)

from conftest import random_ensemble, uniform_ensemble


def test_deterministic_ensemble_gives_constant_sequence():
    identity = TransitionMatrix(np.eye(3))
    ens = WalkerEnsemble(
        [
            ("w1", StateVector.basis(3, 0), identity),
            ("w2", StateVector.basis(3, 0), identity),
            ("w3", StateVector.basis(3, 2), identity),
        ]
    )
    seq = sample_sequence(ens, 10, seed=99)
    expected = ContactGraph.from_cells([["w1", "w2"], ["w3"]])
    assert all(g == expected for g in seq.snapshots)
    assert len(seq) == 11


def test_lockstep_swap_walkers_stay_together():
    swap = TransitionMatrix([[0, 1], [1, 0]])
    ens = WalkerEnsemble(
        [("a", StateVector.basis(2, 0), swap), ("b", StateVector.basis(2, 0), swap)]
    )
    seq = sample_sequence(ens, 20, seed=0)
    k2 = ContactGraph.from_cells([["a", "b"]])
    assert all(g == k2 for g in seq.snapshots)


def test_sampling_is_deterministic_given_seed():
    ens = random_ensemble(4, 5, seed=8)
    a = sample_sequence(ens, 50, seed=1234)
    b = sample_sequence(ens, 50, seed=1234)
    assert a == b
    assert sequence_to_jsonl(a) == sequence_to_jsonl(b)
    c = sample_sequence(ens, 50, seed=1235)
    assert a != c


def test_replica_seed_rule():
    assert replica_seed(5, 0) == 5
    assert replica_seed(5, 3) == 5 ^ 3


def test_empirical_single_replica_is_point_mass():
    ens = uniform_ensemble(3, 3)
    dist = empirical_distribution(ens, 2, replicas=1, seed=0)
    assert list(dist.entries.values()) == [1.0]


def test_empirical_matches_exact_for_two_walkers():
    ens = uniform_ensemble(2, 2)
    replicas = 20_000
    dist = empirical_distribution(ens, 1, replicas=replicas, seed=3)
    pair = ContactGraph.from_cells([["w1", "w2"]])
    assert dist.probability(pair) == pytest.approx(0.5, abs=0.02)
    assert sum(dist.entries.values()) == pytest.approx(1.0, abs=1e-12)


def test_empirical_matches_full_distribution():
    ens = random_ensemble(3, 3, seed=21)
    replicas = 30_000
    emp = empirical_distribution(ens, 2, replicas=replicas, seed=11)
    exact = full_distribution(ens, 2)
    for g, p in exact.entries.items():
        bound = 4.0 * np.sqrt(p * (1 - p) / replicas)
        assert abs(emp.probability(g) - p) <= bound


def test_clique_size_distribution():
    snap = ContactGraph.from_cells([["a", "b"], ["c"]])
    assert clique_size_distribution([snap], min_size=2) == {2: 1.0}
    snap2 = ContactGraph.from_cells([["a", "b"], ["c", "d"], ["e", "f", "g"]])
    hist = clique_size_distribution([snap2], min_size=2)
    assert hist == {2: pytest.approx(2 / 3), 3: pytest.approx(1 / 3)}
    singles = ContactGraph.from_cells([["a"], ["b"]])
    with pytest.raises(ValueError, match="empty histogram"):
        clique_size_distribution([singles], min_size=2)


def test_clique_size_distribution_pools_sequences():
    seq = ContactSequence(
        (
            ContactGraph.from_cells([["a", "b"], ["c"]]),
            ContactGraph.from_cells([["a", "b", "c"]]),
        ),
        seed=0,
    )
    hist = clique_size_distribution([seq], min_size=2)
    assert hist == {2: 0.5, 3: 0.5}


def test_clique_count_distribution():
    one = ContactGraph.from_cells([["a", "b"], ["c"]])
    assert clique_count_distribution([one]) == {2: 1.0}
    three = ContactGraph.from_cells([["a"], ["b"], ["c"]])
    five = ContactGraph.from_cells([["a"], ["b"], ["c"], ["d"], ["e"]])
    assert clique_count_distribution([three, five]) == {3: 0.5, 5: 0.5}
    km = ContactGraph.from_cells([["a", "b", "c", "d"]])
    assert clique_count_distribution([km]) == {1: 1.0}
    assert clique_count_distribution([one], include_singletons=False) == {1: 1.0}


def test_mean_clique_size():
    g = ContactGraph.from_cells([["a", "b", "c"], ["d"]])
    assert mean_clique_size([g]) == 2.0
    assert mean_clique_size([g], min_size=2) == 3.0


def test_sequence_jsonl_roundtrip():
    ens = random_ensemble(3, 3, seed=4)
    seq = sample_sequence(ens, 5, seed=77)
    text = sequence_to_jsonl(seq)
    parsed = snapshots_from_jsonl(text)
    assert [t for t, _ in parsed] == list(range(6))
    assert tuple(g for _, g in parsed) == seq.snapshots


def test_histogram_csv_roundtrip():
    hist = {2: 0.625, 3: 0.375}
    text = histogram_to_csv(hist)
    assert text.splitlines()[0] == "value,probability"
    assert histogram_from_csv(text) == hist

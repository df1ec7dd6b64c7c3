import pytest

from rwig.combinatorics import (
    IntegerPartition,
    SetPartition,
    bell,
    contact_graph_count,
    integer_partitions,
    multiplicity,
    set_partitions,
)
from rwig.contact_graph import (
    ContactGraph,
    UnlabelledContactGraph,
    amass,
    any_labelling,
    default_labels,
    enumerate_graphs,
    from_assignment,
    to_unlabelled,
)


def test_from_assignment_groups_by_state():
    g = from_assignment({"w1": 3, "w2": 3, "w3": 7})
    assert g.to_json_obj() == [["w1", "w2"], ["w3"]]


def test_from_assignment_complete_graph():
    g = from_assignment({w: 1 for w in default_labels(4)})
    assert g.n_cliques == 1
    assert g.clique_sizes == (4,)


def test_from_assignment_all_distinct():
    g = from_assignment({"w1": 0, "w2": 1, "w3": 2})
    assert g.clique_sizes == (1, 1, 1)


def test_enumerate_graphs_counts():
    assert sum(1 for _ in enumerate_graphs(3, 3)) == 5
    assert sum(1 for _ in enumerate_graphs(5, 3)) == 41
    assert sum(1 for _ in enumerate_graphs(6, 5)) == 202
    for m in range(1, 7):
        assert sum(1 for _ in enumerate_graphs(m, m + 2)) == bell(m)


def test_enumerate_graphs_unique_and_bounded():
    seen = set(enumerate_graphs(5, 2))
    assert len(seen) == contact_graph_count(5, 2)
    assert all(g.n_cliques <= 2 for g in seen)


def test_enumerate_graphs_stays_tractable_when_walkers_exceed_states():
    # Pruned generation: 86472 graphs instead of the 115975 unbounded ones.
    count = sum(1 for _ in enumerate_graphs(10, 5))
    assert count == contact_graph_count(10, 5) == 86472


def test_to_unlabelled():
    g = ContactGraph.from_cells([["w1", "w2"], ["w3"]])
    assert to_unlabelled(g).to_json_obj() == [2, 1]
    assert to_unlabelled(from_assignment({w: 0 for w in "abcd"})).to_json_obj() == [4]
    singles = ContactGraph.from_cells([["w1"], ["w2"], ["w3"]])
    assert to_unlabelled(singles).to_json_obj() == [1, 1, 1]


def test_any_labelling():
    u = UnlabelledContactGraph.from_sizes([2, 2])
    g = any_labelling(u, default_labels(4))
    assert g.to_json_obj() == [["w1", "w2"], ["w3", "w4"]]
    u31 = UnlabelledContactGraph.from_sizes([3, 1])
    assert any_labelling(u31, default_labels(4)).to_json_obj() == [
        ["w1", "w2", "w3"],
        ["w4"],
    ]
    assert any_labelling(
        UnlabelledContactGraph.from_sizes([1]), ("w1",)
    ).to_json_obj() == [["w1"]]
    with pytest.raises(ValueError):
        any_labelling(u, default_labels(5))


def test_unlabelling_inverts_any_labelling():
    for m in range(1, 7):
        for q in integer_partitions(m):
            u = UnlabelledContactGraph(q)
            assert to_unlabelled(any_labelling(u, default_labels(m))) == u


def test_multiplicity_counts_labellings():
    for m in range(1, 8):
        for n in range(1, 8):
            counts = {}
            for g in enumerate_graphs(m, n):
                u = to_unlabelled(g)
                counts[u] = counts.get(u, 0) + 1
            for q in integer_partitions(m):
                if q.n_parts > n:
                    assert UnlabelledContactGraph(q) not in counts
                else:
                    assert counts[UnlabelledContactGraph(q)] == multiplicity(q)


def test_amass():
    g = ContactGraph.from_cells([["a", "b"], ["c"], ["d"]])
    pi = SetPartition.from_cells([[0, 1], [2]])
    assert amass(g, pi).to_json_obj() == [["a", "b", "c"], ["d"]]
    trivial = SetPartition.from_cells([[0], [1], [2]])
    assert amass(g, trivial) == g
    with pytest.raises(ValueError):
        amass(g, SetPartition.from_cells([[0, 1]]))


def test_amassings_cover_all_coarser_graphs():
    g = ContactGraph.from_cells([["a"], ["b"], ["c"]])
    amassed = {amass(g, pi) for pi in set_partitions(range(3))}
    assert len(amassed) == bell(3)


def test_json_roundtrip():
    g = ContactGraph.from_cells([["w2", "w1"], ["w3"]])
    assert g.to_json_obj() == [["w1", "w2"], ["w3"]]
    assert ContactGraph.from_json_obj(g.to_json_obj()) == g


def test_graph_equality_is_canonical():
    a = ContactGraph.from_cells([["w3"], ["w2", "w1"]])
    b = ContactGraph.from_cells([["w1", "w2"], ["w3"]])
    assert a == b
    assert hash(a) == hash(b)


def test_unlabelled_equality_is_multiset_equality():
    a = UnlabelledContactGraph.from_sizes([1, 2, 1])
    b = UnlabelledContactGraph.from_sizes([2, 1, 1])
    assert a == b
    assert hash(a) == hash(b)
    assert a.clique_sizes == IntegerPartition((2, 1, 1))

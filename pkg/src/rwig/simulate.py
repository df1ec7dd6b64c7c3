"""Monte-Carlo side of the model: sampled trajectories and contact sequences.

All randomness flows through numpy's seeded Generator.  Replica r of an
estimator uses ``seed ^ r`` passed through the generator's own seeding
function, so runs are reproducible and replicas are independent streams.
"""

from __future__ import annotations

import json
import math
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Iterator

import numpy as np

from .contact_graph import ContactGraph, from_assignment
from .markov import WalkerEnsemble
from .pmf import GraphDistribution


@dataclass(frozen=True)
class ContactSequence:
    """One realisation of the contact graph over an observation window."""

    snapshots: tuple[ContactGraph, ...]
    seed: int

    def __len__(self) -> int:
        return len(self.snapshots)


def replica_seed(seed: int, replica: int) -> int:
    """Stream-splitting rule for replica RNGs."""
    return seed ^ replica


def _draw(cum_rows: np.ndarray, u: np.ndarray) -> np.ndarray:
    # Inverse-CDF draw per row: index of the first cumulative value above u.
    idx = (cum_rows <= u[:, None]).sum(axis=1)
    return np.minimum(idx, cum_rows.shape[1] - 1)


def _walk_states(
    ensemble: WalkerEnsemble, steps: int, rng: np.random.Generator
) -> Iterator[np.ndarray]:
    """Yield the walkers' state indices at times 0..steps."""
    m = ensemble.n_walkers
    cum0 = np.cumsum(
        np.stack([s0.probs for _, s0, _ in ensemble.walkers]), axis=1
    )
    cum_policy = np.stack(
        [np.cumsum(policy.entries, axis=1) for _, _, policy in ensemble.walkers]
    )
    states = _draw(cum0, rng.random(m))
    yield states
    rows_index = np.arange(m)
    for _ in range(steps):
        rows = cum_policy[rows_index, states]
        states = _draw(rows, rng.random(m))
        yield states


def sample_sequence(ensemble: WalkerEnsemble, horizon: int, seed: int) -> ContactSequence:
    """Sample a contact-graph sequence of length horizon + 1.

    Initial states are drawn from each walker's initial vector (callers
    wanting fixed starts pass basis vectors), then each walker takes
    ``horizon`` independent policy steps.  Deterministic given the seed.
    """
    if horizon < 0:
        raise ValueError("horizon must be non-negative")
    rng = np.random.default_rng(seed)
    labels = ensemble.labels
    snapshots = [
        from_assignment(dict(zip(labels, states.tolist())))
        for states in _walk_states(ensemble, horizon, rng)
    ]
    return ContactSequence(tuple(snapshots), seed)


def empirical_distribution(
    ensemble: WalkerEnsemble, k: int, replicas: int, seed: int
) -> GraphDistribution:
    """Contact-graph frequencies at step k over independent replicas."""
    if replicas < 1:
        raise ValueError("replicas must be positive")
    if k < 0:
        raise ValueError("k must be non-negative")
    counts: Counter[tuple[int, ...]] = Counter()
    for r in range(replicas):
        rng = np.random.default_rng(replica_seed(seed, r))
        for states in _walk_states(ensemble, k, rng):
            pass
        counts[tuple(states.tolist())] += 1
    labels = ensemble.labels
    entries: dict[ContactGraph, float] = {}
    for assignment, c in counts.items():
        g = from_assignment(dict(zip(labels, assignment)))
        entries[g] = entries.get(g, 0.0) + c / replicas
    return GraphDistribution(entries, time=k, ensemble=ensemble)


def _iter_snapshots(source: Iterable) -> Iterator[ContactGraph]:
    for item in source:
        if isinstance(item, ContactSequence):
            yield from item.snapshots
        elif isinstance(item, ContactGraph):
            yield item
        else:
            raise TypeError(f"expected ContactSequence or ContactGraph, got {item!r}")


def clique_size_distribution(source: Iterable, min_size: int = 2) -> dict[int, float]:
    """Normalized histogram of clique sizes pooled over all snapshots.

    Only cliques of at least ``min_size`` walkers are counted (size 2 keeps
    just the cliques that represent actual contacts).
    """
    if min_size < 1:
        raise ValueError("min_size must be positive")
    counter: Counter[int] = Counter()
    for g in _iter_snapshots(source):
        for q in g.clique_sizes:
            if q >= min_size:
                counter[q] += 1
    total = sum(counter.values())
    if total == 0:
        raise ValueError("empty histogram: no cliques at or above min_size")
    return {q: c / total for q, c in sorted(counter.items())}


def clique_count_distribution(
    source: Iterable, include_singletons: bool = True
) -> dict[int, float]:
    """Normalized histogram of the number of cliques per snapshot.

    Singleton cliques count by default; pass include_singletons=False to
    count only cliques of two or more walkers.
    """
    counter: Counter[int] = Counter()
    n_snapshots = 0
    for g in _iter_snapshots(source):
        n_snapshots += 1
        if include_singletons:
            counter[g.n_cliques] += 1
        else:
            counter[sum(1 for q in g.clique_sizes if q > 1)] += 1
    if n_snapshots == 0:
        raise ValueError("no snapshots given")
    return {c: n / n_snapshots for c, n in sorted(counter.items())}


def mean_clique_size(source: Iterable, min_size: int = 1) -> float:
    """Average clique size pooled over all snapshots."""
    total = 0
    count = 0
    for g in _iter_snapshots(source):
        for q in g.clique_sizes:
            if q >= min_size:
                total += q
                count += 1
    if count == 0:
        raise ValueError("no cliques to average")
    return total / count


# --- serialization ----------------------------------------------------------


def sequence_to_jsonl(seq: ContactSequence) -> str:
    """One snapshot per line: {"t": k, "graph": [[...], ...]}."""
    lines = [
        json.dumps({"t": t, "graph": g.to_json_obj()}, separators=(",", ":"))
        for t, g in enumerate(seq.snapshots)
    ]
    return "\n".join(lines) + "\n"


def snapshots_from_jsonl(text: str) -> list[tuple[int, ContactGraph]]:
    out = []
    for line in text.splitlines():
        if not line.strip():
            continue
        obj = json.loads(line)
        out.append((obj["t"], ContactGraph.from_json_obj(obj["graph"])))
    return out


def histogram_to_csv(hist: dict[int, float]) -> str:
    lines = ["value,probability"]
    lines += [f"{value},{p!r}" for value, p in sorted(hist.items())]
    return "\n".join(lines) + "\n"


def histogram_from_csv(text: str) -> dict[int, float]:
    lines = [l for l in text.splitlines() if l.strip()]
    if not lines or lines[0] != "value,probability":
        raise ValueError("histogram CSV must start with 'value,probability'")
    hist = {}
    for line in lines[1:]:
        value, p = line.split(",")
        hist[int(value)] = float(p)
    return hist


def histogram_mean(hist: dict[int, float]) -> float:
    return math.fsum(value * p for value, p in hist.items())

"""Exact contact-graph probabilities.

Two independent evaluation routes are kept side by side:

* a closed form that expands a graph's probability into a signed sum of
  co-location (sigma) products over all partitions of its cliques, and
* a combinatorial brute force that sums over every ordered assignment of
  cliques to distinct states.

The brute force is the oracle; it is slower by design and must never be
"optimized" into the closed form.  The closed form owes its speed to the
heavy reuse of sigma terms across partitions, so evaluations share a cache
keyed by the walker subset.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Hashable, Iterable, Iterator

import numpy as np

from .combinatorics import (
    contact_graph_count,
    integer_partitions,
    multiplicity,
    set_partitions,
)
from .contact_graph import (
    ContactGraph,
    UnlabelledContactGraph,
    enumerate_graphs,
)
from .markov import StateVector, WalkerEnsemble

NEGATIVE_DUST = 1e-10


class ProbabilityError(RuntimeError):
    """A computed probability left [0, 1] by more than numerical dust."""


def _clamp(p: float, what: str) -> float:
    if p < 0.0:
        if p < -NEGATIVE_DUST:
            raise ProbabilityError(f"{what} evaluated to {p!r}, well below zero")
        return 0.0
    if p > 1.0:
        if p > 1.0 + NEGATIVE_DUST:
            raise ProbabilityError(f"{what} evaluated to {p!r}, well above one")
        return 1.0
    return p


# Signed weight of a cell holding c cliques: (-1)^(c-1) (c-1)!.
_CELL_WEIGHT = [0.0, 1.0]


def _cell_weight(c: int) -> float:
    while len(_CELL_WEIGHT) <= c:
        n = len(_CELL_WEIGHT)
        _CELL_WEIGHT.append(-_CELL_WEIGHT[n - 1] * (n - 1))
    return _CELL_WEIGHT[c]


def sigma(subset: Iterable[Hashable], ensemble: WalkerEnsemble, k: int) -> float:
    """Probability that all walkers in ``subset`` share a state at time k.

    The entrywise product of the walkers' k-step distributions, summed over
    states.  Singletons give exactly 1.
    """
    rows = [ensemble.index[w] for w in subset]
    if not rows:
        raise ValueError("sigma of an empty walker subset is undefined")
    states = ensemble.state_matrix(k)
    return float(states[rows].prod(axis=0).sum())


def sigma_expansion_terms(
    g: ContactGraph,
) -> Iterator[tuple[int, tuple[frozenset, ...]]]:
    """Symbolic expansion of a graph probability into sigma products.

    Yields one (weight, amassed cliques) pair per partition of g's cliques:
    the integer weight is the product of cell weights and each amassed
    clique is the union of the cliques grouped into one cell.  Summing
    weight * prod(sigma(amassed)) over all terms gives the probability.
    """
    cliques = [frozenset(cell) for cell in g.cliques.cells]
    for pi in set_partitions(range(len(cliques))):
        weight = 1
        amassed = []
        for cell in pi.cells:
            weight *= (-1) ** (len(cell) - 1) * math.factorial(len(cell) - 1)
            amassed.append(frozenset().union(*(cliques[i] for i in cell)))
        yield weight, tuple(amassed)


def _expansion_sum(items: list, value_of_cell: Callable[[object, int], float],
                   join: Callable[[object, object], object]) -> float:
    """Sum over all partitions of ``items`` of the product of cell values.

    Cells are built incrementally (each item either joins an existing cell
    or opens a new one), so the sum runs in time proportional to the number
    of partitions without materializing them.  ``join`` merges an item into
    a cell's accumulated payload; ``value_of_cell(payload, count)`` is the
    weighted factor of a finished cell.
    """
    total = 0.0
    payloads: list = []
    counts: list[int] = []

    def grow(i: int) -> None:
        nonlocal total
        if i == len(items):
            term = 1.0
            for payload, count in zip(payloads, counts):
                term *= value_of_cell(payload, count)
            total += term
            return
        item = items[i]
        for j in range(len(payloads)):
            saved = payloads[j]
            payloads[j] = join(saved, item)
            counts[j] += 1
            grow(i + 1)
            payloads[j] = saved
            counts[j] -= 1
        payloads.append(item)
        counts.append(1)
        grow(i + 1)
        payloads.pop()
        counts.pop()

    grow(0)
    return total


def _check_graph(g: ContactGraph, ensemble: WalkerEnsemble) -> None:
    if g.walkers != frozenset(ensemble.labels):
        raise ValueError("graph does not partition the ensemble's walker set")


def pmf_closed_form(
    g: ContactGraph,
    ensemble: WalkerEnsemble,
    k: int,
    *,
    _states: np.ndarray | None = None,
    _sigma_cache: dict | None = None,
) -> float:
    """Probability of contact graph ``g`` at time k, by sigma expansion.

    Graphs with more cliques than states have probability 0 and are not
    evaluated.  ``_states`` and ``_sigma_cache`` let a caller evaluating
    many graphs at one time step share propagation work and sigma terms.
    """
    _check_graph(g, ensemble)
    if g.n_cliques > ensemble.n_states:
        return 0.0
    states = ensemble.state_matrix(k) if _states is None else _states
    cache = {} if _sigma_cache is None else _sigma_cache

    # Cliques as bit masks over walker indices; amassing is a bitwise or.
    index = ensemble.index
    masks = []
    for cell in g.cliques.cells:
        mask = 0
        for w in cell:
            mask |= 1 << index[w]
        masks.append(mask)

    def sigma_of(mask: int) -> float:
        value = cache.get(mask)
        if value is None:
            rows = [i for i in range(ensemble.n_walkers) if mask >> i & 1]
            value = float(states[rows].prod(axis=0).sum())
            cache[mask] = value
        return value

    total = _expansion_sum(
        masks,
        value_of_cell=lambda mask, c: _cell_weight(c) * sigma_of(mask),
        join=lambda a, b: a | b,
    )
    return _clamp(total, f"closed-form probability of {g.to_json_obj()}")


def pmf_bruteforce(
    g: ContactGraph,
    ensemble: WalkerEnsemble,
    k: int,
    *,
    _states: np.ndarray | None = None,
) -> float:
    """Probability of ``g`` by direct summation over state assignments.

    Sums, over every ordered tuple of m distinct states, the product over
    cliques of the walkers' probabilities of sitting in the clique's state.
    Independent of the sigma expansion; kept as the oracle for it.
    """
    _check_graph(g, ensemble)
    states = ensemble.state_matrix(k) if _states is None else _states
    n = ensemble.n_states
    index = ensemble.index
    # weight[c][i]: probability that all walkers of clique c are in state i.
    weights = [
        states[[index[w] for w in cell]].prod(axis=0).tolist()
        for cell in g.cliques.cells
    ]
    m = len(weights)
    if m > n:
        return 0.0

    def assign(c: int, used: int, partial: float) -> float:
        if c == m:
            return partial
        row = weights[c]
        subtotal = 0.0
        for i in range(n):
            if used >> i & 1:
                continue
            w = row[i]
            if w == 0.0:
                continue
            subtotal += assign(c + 1, used | (1 << i), partial * w)
        return subtotal

    return assign(0, 0, 1.0)


@dataclass
class GraphDistribution:
    """A probability map over contact graphs (labelled or unlabelled)."""

    entries: dict
    time: int | None = None
    ensemble: WalkerEnsemble | None = None

    def total(self) -> float:
        return math.fsum(self.entries.values())

    def probability(self, key) -> float:
        return self.entries.get(key, 0.0)

    def argmax(self):
        return max(self.entries, key=lambda g: self.entries[g])

    def sorted_items(self) -> list:
        """Entries by descending probability, ties in canonical graph order."""

        def tie_break(key):
            if isinstance(key, ContactGraph):
                return key.sort_key()
            return key.clique_sizes.parts

        return sorted(self.entries.items(), key=lambda kv: (-kv[1], tie_break(kv[0])))

    def to_json_obj(self) -> list[dict]:
        return [
            {"graph": key.to_json_obj(), "p": p} for key, p in self.sorted_items()
        ]


def full_distribution(
    ensemble: WalkerEnsemble,
    k: int,
    *,
    budget: int = 10**6,
    method: str = "closed_form",
) -> GraphDistribution:
    """Exact distribution over every admissible contact graph at time k.

    Refuses state spaces larger than ``budget`` graphs; for many walkers on
    few states the unlabelled steady-state route is the tractable one.
    ``method`` selects the evaluation path ("closed_form" or "bruteforce"),
    which the benchmark harness times against each other.
    """
    m, n = ensemble.n_walkers, ensemble.n_states
    size = contact_graph_count(m, n)
    if size > budget:
        raise ValueError(
            f"state space has {size} graphs, over the budget of {budget}; "
            "consider the unlabelled steady-state distribution instead"
        )
    if method not in ("closed_form", "bruteforce"):
        raise ValueError(f"unknown method {method!r}")
    states = ensemble.state_matrix(k)
    cache: dict = {}
    entries = {}
    for g in enumerate_graphs(m, n, labels=ensemble.labels):
        if method == "closed_form":
            entries[g] = pmf_closed_form(
                g, ensemble, k, _states=states, _sigma_cache=cache
            )
        else:
            entries[g] = pmf_bruteforce(g, ensemble, k, _states=states)
    return GraphDistribution(entries, time=k, ensemble=ensemble)


# --- steady state -----------------------------------------------------------


def steady_state_sigma(clique_size: int, s_tilde: StateVector) -> float:
    """Co-location probability of a q-walker clique in the steady state.

    With every walker sharing the stationary vector, sigma collapses to the
    power sum of its entries: sum_i (s_i)^q.
    """
    if clique_size < 1:
        raise ValueError("clique_size must be positive")
    return float(np.sum(s_tilde.probs ** clique_size))


@lru_cache(maxsize=None)
def _amassed_coefficients(
    sizes: tuple[int, ...]
) -> tuple[tuple[tuple[int, ...], int], ...]:
    """Exact net weight of each amassed-size multiset in the expansion.

    Summing over all partitions of cliques with the given sizes, groups the
    signed cell weights by the multiset of amassed-clique sizes they attach
    to.  The grouped form has at most p(M) terms, so huge cancelling weights
    collapse into small exact integers before any floating point happens.
    """
    coefficients: dict[tuple[int, ...], int] = {}
    cell_sums: list[int] = []
    cell_counts: list[int] = []

    def grow(i: int) -> None:
        if i == len(sizes):
            weight = 1
            for c in cell_counts:
                weight *= (-1) ** (c - 1) * math.factorial(c - 1)
            key = tuple(sorted(cell_sums, reverse=True))
            coefficients[key] = coefficients.get(key, 0) + weight
            return
        q = sizes[i]
        for j in range(len(cell_sums)):
            cell_sums[j] += q
            cell_counts[j] += 1
            grow(i + 1)
            cell_sums[j] -= q
            cell_counts[j] -= 1
        cell_sums.append(q)
        cell_counts.append(1)
        grow(i + 1)
        cell_sums.pop()
        cell_counts.pop()

    grow(0)
    return tuple(sorted(coefficients.items()))


def labelled_steady_state_pmf(
    clique_sizes: Iterable[int], s_tilde: StateVector
) -> float:
    """Steady-state probability of any labelled graph with these clique sizes.

    In the steady state the sigma expansion depends only on clique sizes
    (amassed cliques contribute the power sum of their total size), so every
    labelling of the same size multiset has the same probability.  The
    alternating sum is evaluated in exact rational arithmetic: at ten or
    more walkers the cancellation between terms outruns double precision
    while true probabilities can sit below 1e-12.
    """
    sizes = tuple(sorted((int(q) for q in clique_sizes), reverse=True))
    if not sizes or sizes[-1] < 1:
        raise ValueError("clique sizes must be positive")
    if len(sizes) > s_tilde.n_states:
        return 0.0
    probs = [Fraction(x) for x in s_tilde.probs.tolist()]
    power: dict[int, Fraction] = {}
    running = list(probs)
    for q in range(1, sum(sizes) + 1):
        power[q] = sum(running, Fraction(0))
        running = [r * p for r, p in zip(running, probs)]
    total = Fraction(0)
    for amassed_sizes, coefficient in _amassed_coefficients(sizes):
        term = Fraction(coefficient)
        for q in amassed_sizes:
            term *= power[q]
        total += term
    return _clamp(float(total), f"steady-state probability of clique sizes {sizes}")


def unlabelled_steady_state_pmf(
    u: UnlabelledContactGraph,
    s_tilde: StateVector,
    *,
    cross_check: bool = False,
) -> float:
    """Steady-state probability of an unlabelled contact graph.

    The labelled probability of one representative, scaled by the number of
    labelled graphs sharing the size multiset.  With ``cross_check`` the
    value is re-derived by direct state enumeration and a disagreement
    beyond 1e-10 raises; the brute force explodes combinatorially, so the
    check is opt-in and meant for small walker counts.
    """
    if u.n_cliques > s_tilde.n_states:
        raise ValueError(
            f"{u.n_cliques} cliques cannot occupy {s_tilde.n_states} states"
        )
    p = multiplicity(u.clique_sizes) * labelled_steady_state_pmf(
        u.clique_sizes.parts, s_tilde
    )
    p = _clamp(p, f"unlabelled steady-state probability of {u.to_json_obj()}")
    if cross_check:
        reference = unlabelled_steady_state_pmf_bruteforce(u, s_tilde)
        if abs(p - reference) > 1e-10:
            raise ProbabilityError(
                f"steady-state routes disagree on {u.to_json_obj()}: "
                f"{p!r} vs {reference!r}"
            )
    return p


def unlabelled_steady_state_pmf_bruteforce(
    u: UnlabelledContactGraph, s_tilde: StateVector
) -> float:
    """Oracle route for the unlabelled steady-state probability.

    M!/(prod q_i! prod c_j!) times the sum over ordered tuples of distinct
    states of prod_j (s_{i_j})^{q_j}.
    """
    sizes = u.clique_sizes.parts
    n = s_tilde.n_states
    if len(sizes) > n:
        raise ValueError(f"{len(sizes)} cliques cannot occupy {n} states")
    probs = s_tilde.probs
    weights = [(probs ** q).tolist() for q in sizes]
    m = len(sizes)

    def assign(c: int, used: int, partial: float) -> float:
        if c == m:
            return partial
        row = weights[c]
        subtotal = 0.0
        for i in range(n):
            if used >> i & 1:
                continue
            w = row[i]
            if w == 0.0:
                continue
            subtotal += assign(c + 1, used | (1 << i), partial * w)
        return subtotal

    counts = 1
    for j in set(sizes):
        counts *= math.factorial(sizes.count(j))
    denom = counts
    for q in sizes:
        denom *= math.factorial(q)
    return math.factorial(u.n_walkers) / denom * assign(0, 0, 1.0)


def unlabelled_steady_state_distribution(
    m_walkers: int, s_tilde: StateVector, *, cross_check: bool = False
) -> GraphDistribution:
    """Distribution over all unlabelled graphs with at most N cliques."""
    if m_walkers < 1:
        raise ValueError("m_walkers must be positive")
    entries = {}
    for q in integer_partitions(m_walkers):
        if q.n_parts > s_tilde.n_states:
            continue
        u = UnlabelledContactGraph(q)
        entries[u] = unlabelled_steady_state_pmf(u, s_tilde, cross_check=cross_check)
    return GraphDistribution(entries, time=None, ensemble=None)


def _sizes_of(key) -> tuple[int, ...]:
    if isinstance(key, ContactGraph):
        return key.clique_sizes
    return key.clique_sizes.parts


def distribution_clique_size_histogram(
    dist: GraphDistribution, min_size: int = 2
) -> dict[int, float]:
    """Probability of observing a clique of each size under ``dist``.

    Cliques are pooled across realisations weighted by realisation
    probability; sizes below ``min_size`` are dropped before normalization.
    """
    if min_size < 1:
        raise ValueError("min_size must be positive")
    pooled: dict[int, float] = {}
    for key, p in dist.entries.items():
        for q in _sizes_of(key):
            if q >= min_size:
                pooled[q] = pooled.get(q, 0.0) + p
    total = math.fsum(pooled.values())
    if total == 0.0:
        raise ValueError("empty histogram: no cliques at or above min_size")
    return {q: w / total for q, w in sorted(pooled.items())}


def distribution_clique_count_histogram(
    dist: GraphDistribution, include_singletons: bool = True
) -> dict[int, float]:
    """Distribution of the number of cliques per realisation under ``dist``."""
    hist: dict[int, float] = {}
    for key, p in dist.entries.items():
        sizes = _sizes_of(key)
        count = len(sizes) if include_singletons else sum(1 for q in sizes if q > 1)
        hist[count] = hist.get(count, 0.0) + p
    return dict(sorted(hist.items()))

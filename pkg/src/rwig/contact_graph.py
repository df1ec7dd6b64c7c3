"""Contact graphs as partitions of the walker set into cliques."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Hashable, Iterable, Iterator, Mapping, Sequence

from .combinatorics import IntegerPartition, SetPartition, set_partitions


@dataclass(frozen=True)
class ContactGraph:
    """A disjoint union of cliques over walker labels.

    Walkers co-located in one state form one clique; singleton cliques are
    genuine cliques of size 1.  Canonical cell order is inherited from
    SetPartition, so equal graphs compare and hash equal.
    """

    cliques: SetPartition

    @classmethod
    def from_cells(cls, cells: Iterable[Iterable[Hashable]]) -> "ContactGraph":
        return cls(SetPartition.from_cells(cells))

    @property
    def walkers(self) -> frozenset:
        return self.cliques.labels

    @property
    def n_walkers(self) -> int:
        return sum(self.cliques.cell_sizes)

    @property
    def n_cliques(self) -> int:
        return self.cliques.n_cells

    @property
    def clique_sizes(self) -> tuple[int, ...]:
        return self.cliques.cell_sizes

    def to_json_obj(self) -> list[list]:
        """JSON form: array of arrays of walker labels, cells canonical."""
        return [list(cell) for cell in self.cliques.cells]

    @classmethod
    def from_json_obj(cls, obj: Iterable[Iterable[Hashable]]) -> "ContactGraph":
        return cls.from_cells(obj)

    def sort_key(self) -> tuple:
        """Deterministic tie-break order: fewer cliques first, then cells."""
        return (self.n_cliques, self.cliques.cells)


@dataclass(frozen=True)
class UnlabelledContactGraph:
    """A contact graph up to walker relabelling: the clique-size multiset."""

    clique_sizes: IntegerPartition

    @classmethod
    def from_sizes(cls, sizes: Iterable[int]) -> "UnlabelledContactGraph":
        return cls(IntegerPartition.from_parts(sizes))

    @property
    def n_walkers(self) -> int:
        return self.clique_sizes.total

    @property
    def n_cliques(self) -> int:
        return self.clique_sizes.n_parts

    def to_json_obj(self) -> list[int]:
        return list(self.clique_sizes.parts)


def from_assignment(assignment: Mapping[Hashable, int]) -> ContactGraph:
    """Contact graph induced by a walker -> state assignment.

    Walkers mapped to the same state are connected, so each occupied state
    contributes one clique.
    """
    if not assignment:
        raise ValueError("assignment must cover at least one walker")
    by_state: dict[int, list] = {}
    for walker, state in assignment.items():
        by_state.setdefault(state, []).append(walker)
    return ContactGraph.from_cells(by_state.values())


def enumerate_graphs(
    m_walkers: int, n_states: int, labels: Sequence[Hashable] | None = None
) -> Iterator[ContactGraph]:
    """Stream the full contact-graph state space for M walkers on N states.

    Yields each graph with at most min(N, M) cliques exactly once; the count
    equals contact_graph_count(M, N).  Default labels are "w1".."wM".
    """
    if labels is None:
        labels = default_labels(m_walkers)
    elif len(labels) != m_walkers:
        raise ValueError(f"expected {m_walkers} labels, got {len(labels)}")
    if n_states < 1:
        raise ValueError("n_states must be positive")
    bound = min(n_states, m_walkers)
    for pi in set_partitions(labels, max_cells=bound):
        yield ContactGraph(pi)


def to_unlabelled(g: ContactGraph) -> UnlabelledContactGraph:
    """Drop walker labels, keeping only the clique-size multiset."""
    return UnlabelledContactGraph.from_sizes(g.clique_sizes)


def any_labelling(
    u: UnlabelledContactGraph, walkers: Sequence[Hashable]
) -> ContactGraph:
    """Deterministic canonical labelling of an unlabelled graph.

    Walkers are consumed in the given order and poured into cliques of
    non-increasing size.  Any labelling would do for probability purposes;
    this one is reproducible.
    """
    sizes = u.clique_sizes.parts
    if sum(sizes) != len(walkers):
        raise ValueError(
            f"clique sizes sum to {sum(sizes)} but {len(walkers)} walkers given"
        )
    cells = []
    cursor = 0
    for size in sizes:
        cells.append(walkers[cursor : cursor + size])
        cursor += size
    return ContactGraph.from_cells(cells)


def amass(g: ContactGraph, pi: SetPartition) -> ContactGraph:
    """Merge cliques of ``g`` grouped by a partition of its clique indices.

    ``pi`` partitions {0, .., m-1}; each cell's cliques are unioned into one
    amassed clique of the resulting graph.
    """
    cliques = g.cliques.cells
    if pi.labels != frozenset(range(len(cliques))):
        raise ValueError("pi must partition the clique indices 0..m-1")
    merged = []
    for cell in pi.cells:
        amassed: list = []
        for idx in cell:
            amassed.extend(cliques[idx])
        merged.append(amassed)
    return ContactGraph.from_cells(merged)


def default_labels(m_walkers: int) -> tuple[str, ...]:
    """Walker labels "w1".."wM" used when callers do not supply their own."""
    if m_walkers < 1:
        raise ValueError("m_walkers must be positive")
    return tuple(f"w{i}" for i in range(1, m_walkers + 1))

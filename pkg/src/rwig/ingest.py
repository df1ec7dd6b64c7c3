"""Parsing and validation of empirical co-location snapshots.

Input is the plain-text edge-list convention of public co-location
releases: one "t i j" triple per line, meaning nodes i and j shared a
location during time bin t.  Node ids are opaque strings.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .contact_graph import ContactGraph
from .simulate import ContactSequence, clique_count_distribution, clique_size_distribution


class ColocationParseError(ValueError):
    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


@dataclass(frozen=True)
class SnapshotRecord:
    """All co-location pairs observed in one time bin."""

    timestamp: int
    edges: tuple[tuple[str, str], ...]

    @property
    def nodes(self) -> frozenset[str]:
        return frozenset(n for e in self.edges for n in e)


@dataclass(frozen=True)
class NonCliqueComponent:
    nodes: tuple[str, ...]
    missing_pairs: int


@dataclass(frozen=True)
class CliqueUnionViolation:
    """Connected components of a snapshot that are not complete subgraphs."""

    timestamp: int
    components: tuple[NonCliqueComponent, ...]


def parse_colocation(lines: Iterable[str]) -> list[SnapshotRecord]:
    """Parse "t i j" lines into per-bin records, ascending in t.

    Blank lines are skipped; duplicate (t, i, j) observations collapse to
    one edge.  Malformed lines and self contacts raise with the line number.
    """
    bins: dict[int, set[tuple[str, str]]] = {}
    for line_no, raw in enumerate(lines, start=1):
        text = raw.strip()
        if not text:
            continue
        fields = text.split()
        if len(fields) != 3:
            raise ColocationParseError(
                line_no, f"expected 't i j', got {len(fields)} fields"
            )
        t_text, i, j = fields
        try:
            t = int(t_text)
        except ValueError:
            raise ColocationParseError(line_no, f"bad timestamp {t_text!r}") from None
        if i == j:
            raise ColocationParseError(line_no, f"self contact on node {i!r}")
        bins.setdefault(t, set()).add((i, j) if i < j else (j, i))
    return [
        SnapshotRecord(t, tuple(sorted(bins[t]))) for t in sorted(bins)
    ]


def validate_clique_union(
    record: SnapshotRecord,
) -> ContactGraph | CliqueUnionViolation:
    """Check that a snapshot is a disjoint union of cliques.

    Every connected component of c nodes must contain all c(c-1)/2 pairs.
    Returns the induced contact graph on success, otherwise a report of the
    incomplete components and how many pairs each is missing.
    """
    neighbours: dict[str, set[str]] = {}
    for i, j in record.edges:
        neighbours.setdefault(i, set()).add(j)
        neighbours.setdefault(j, set()).add(i)

    components: list[tuple[str, ...]] = []
    component_of: dict[str, int] = {}
    for start in sorted(neighbours):
        if start in component_of:
            continue
        stack = [start]
        component = set()
        while stack:
            node = stack.pop()
            if node in component:
                continue
            component.add(node)
            stack.extend(neighbours[node] - component)
        for node in component:
            component_of[node] = len(components)
        components.append(tuple(sorted(component)))

    edge_counts = [0] * len(components)
    for i, _ in record.edges:
        edge_counts[component_of[i]] += 1

    bad = []
    for component, edges_inside in zip(components, edge_counts):
        expected = len(component) * (len(component) - 1) // 2
        if edges_inside != expected:
            bad.append(NonCliqueComponent(component, expected - edges_inside))
    if bad:
        return CliqueUnionViolation(record.timestamp, tuple(bad))
    return ContactGraph.from_cells(components)


def dataset_distributions(
    records: Iterable[SnapshotRecord], roster: Iterable[str] | None = None
) -> tuple[dict[int, float], dict[int, float]]:
    """Clique-size and clique-count histograms of a validated dataset.

    Sizes use min_size 2 (edge lists cannot show fewer).  Without a roster,
    nodes absent from a bin are invisible and the count histogram covers
    only cliques of two or more; with a roster, absent nodes enter the
    count histogram as singleton cliques.
    """
    roster_set = frozenset(roster) if roster is not None else None
    graphs: list[ContactGraph] = []
    count_graphs: list[ContactGraph] = []
    for record in records:
        result = validate_clique_union(record)
        if isinstance(result, CliqueUnionViolation):
            worst = ", ".join(
                f"{c.nodes} missing {c.missing_pairs}" for c in result.components
            )
            raise ValueError(
                f"snapshot at t={record.timestamp} is not a union of cliques: {worst}"
            )
        graphs.append(result)
        if roster_set is None:
            count_graphs.append(result)
        else:
            extra = roster_set - record.nodes
            cells = [list(c) for c in result.cliques.cells]
            cells.extend([n] for n in sorted(extra))
            count_graphs.append(ContactGraph.from_cells(cells))
    size_hist = clique_size_distribution(graphs, min_size=2)
    count_hist = clique_count_distribution(count_graphs)
    return size_hist, count_hist


def load_roster(lines: Iterable[str]) -> tuple[str, ...]:
    """One node id per line; blanks skipped."""
    roster = [line.strip() for line in lines if line.strip()]
    if len(set(roster)) != len(roster):
        raise ValueError("roster contains duplicate node ids")
    return tuple(roster)


def records_to_text(records: Iterable[SnapshotRecord]) -> str:
    """Canonical "t i j" text: bins ascending, edges sorted within a bin."""
    lines = []
    for record in records:
        for i, j in record.edges:
            lines.append(f"{record.timestamp} {i} {j}")
    return "\n".join(lines) + "\n"


def sequence_to_records(seq: ContactSequence) -> list[SnapshotRecord]:
    """Export a sampled sequence in the empirical snapshot format.

    Cliques become their full pair sets; singleton cliques have no pairs
    and are invisible, exactly as in real edge lists.
    """
    records = []
    for t, g in enumerate(seq.snapshots):
        edges = []
        for cell in g.cliques.cells:
            members = sorted(str(w) for w in cell)
            for a in range(len(members)):
                for b in range(a + 1, len(members)):
                    edges.append((members[a], members[b]))
        records.append(SnapshotRecord(t, tuple(sorted(edges))))
    return records

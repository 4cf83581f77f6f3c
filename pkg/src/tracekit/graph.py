"""Directed, typed traceability graph over a Model.

Nodes are entity ids. Edges are the model's links plus one ``PARENT`` edge
(parent -> child) per requirement that declares a parent. Traversals take a
set of ``(LinkKind, Direction)`` steps; all set-valued results come back
sorted by id.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable

import networkx as nx

from tracekit.errors import UnknownReference
from tracekit.model import ELEMENT_KINDS, REQUIREMENT_KINDS, EntityKind, LinkKind, Model


class Direction(enum.Enum):
    FORWARD = "forward"
    REVERSE = "reverse"
    BOTH = "both"


Step = tuple[LinkKind, Direction]


@dataclass(frozen=True)
class Edge:
    kind: LinkKind
    source: str
    target: str
    # index into Model.links, None for synthesized parent edges
    link_index: int | None = None


@dataclass(frozen=True, eq=False)
class TraceGraph:
    nodes: tuple[str, ...]
    edges: tuple[Edge, ...]
    node_kinds: dict[str, EntityKind]
    _out: dict[tuple[LinkKind, str], list[str]] = field(repr=False, default_factory=dict)
    _in: dict[tuple[LinkKind, str], list[str]] = field(repr=False, default_factory=dict)

    def successors(self, node: str, kind: LinkKind) -> list[str]:
        return self._out.get((kind, node), [])

    def predecessors(self, node: str, kind: LinkKind) -> list[str]:
        return self._in.get((kind, node), [])

    def step(self, node: str, kind: LinkKind, direction: Direction) -> list[str]:
        if direction is Direction.FORWARD:
            return self.successors(node, kind)
        if direction is Direction.REVERSE:
            return self.predecessors(node, kind)
        return self.successors(node, kind) + self.predecessors(node, kind)

    def __contains__(self, node: object) -> bool:
        return node in self.node_kinds


def build_graph(model: Model) -> TraceGraph:
    edges = [Edge(link.kind, link.source, link.target, i) for i, link in enumerate(model.links)]
    edges += [Edge(LinkKind.PARENT, r.parent, r.id) for r in model.requirements if r.parent is not None]
    out: dict[tuple[LinkKind, str], list[str]] = {}
    inc: dict[tuple[LinkKind, str], list[str]] = {}
    for e in edges:
        out.setdefault((e.kind, e.source), []).append(e.target)
        inc.setdefault((e.kind, e.target), []).append(e.source)
    for adj in (out, inc):
        for key in adj:
            adj[key] = sorted(set(adj[key]))
    kinds = {entity.id: entity.kind for entity in model.entities()}
    return TraceGraph(tuple(sorted(kinds)), tuple(edges), kinds, out, inc)


def expand_steps(steps: Iterable[Step]) -> frozenset[tuple[LinkKind, Direction]]:
    """Replace every BOTH step by its FORWARD and REVERSE halves."""
    out: set[tuple[LinkKind, Direction]] = set()
    for kind, direction in steps:
        if direction is Direction.BOTH:
            out.add((kind, Direction.FORWARD))
            out.add((kind, Direction.REVERSE))
        else:
            out.add((kind, direction))
    return frozenset(out)


def _check_nodes(graph: TraceGraph, ids: Iterable[str]) -> list[str]:
    ids = sorted(set(ids))
    for node in ids:
        if node not in graph:
            raise UnknownReference(node)
    return ids


def witness_paths(graph: TraceGraph, start: Iterable[str], steps: Iterable[Step]) -> dict[str, tuple[str, ...]]:
    """Breadth-first search from ``start`` following only ``steps``.

    Maps every node reachable in one or more steps to a shortest path from a
    start node (so its distance is ``len(path) - 1``). Start nodes appear only
    when they are reached again. Each frontier is expanded in path order, so
    the witness is the lexicographically smallest of the shortest paths.
    """
    frontier = [(node, (node,)) for node in _check_nodes(graph, start)]
    relation = sorted(expand_steps(steps), key=lambda s: (s[0].value, s[1].value))
    found: dict[str, tuple[str, ...]] = {}
    while frontier and relation:
        nxt: list[tuple[str, tuple[str, ...]]] = []
        for node, here in frontier:
            neighbours = sorted({m for kind, d in relation for m in graph.step(node, kind, d)})
            for m in neighbours:
                if m not in found:
                    found[m] = here + (m,)
                    nxt.append((m, found[m]))
        nxt.sort(key=lambda item: item[1])
        frontier = nxt
    return found


def reachable(graph: TraceGraph, start: Iterable[str], steps: Iterable[Step]) -> list[str]:
    """Sorted ids reachable from ``start`` in one or more ``steps``."""
    return sorted(witness_paths(graph, start, steps))


def find_cycles(graph: TraceGraph, kinds: Iterable[LinkKind]) -> list[list[str]]:
    """Every elementary cycle of the subgraph restricted to ``kinds``.

    Each cycle is rotated to start at its smallest id; the list is sorted.
    """
    kinds = set(kinds)
    if not kinds:
        raise ValueError("find_cycles needs at least one edge kind")
    sub = nx.DiGraph()
    sub.add_edges_from((e.source, e.target) for e in graph.edges if e.kind in kinds)
    cycles = set()
    for cycle in nx.simple_cycles(sub):
        pivot = cycle.index(min(cycle))
        cycles.add(tuple(cycle[pivot:] + cycle[:pivot]))
    return [list(c) for c in sorted(cycles)]


_FILTERS: dict[str, frozenset[EntityKind]] = {k.value: frozenset({k}) for k in EntityKind}
_FILTERS.update(
    {
        "requirement": REQUIREMENT_KINDS,
        "element": ELEMENT_KINDS,
        "any": frozenset(EntityKind),
    }
)
KIND_FILTERS = tuple(sorted(_FILTERS))


def kind_filter(name: str | EntityKind) -> frozenset[EntityKind]:
    if isinstance(name, EntityKind):
        return frozenset({name})
    try:
        return _FILTERS[name]
    except KeyError:
        raise ValueError(f"unknown entity kind filter '{name}' (choose from {', '.join(KIND_FILTERS)})") from None


@dataclass(frozen=True)
class TraceMatrix:
    rows: tuple[str, ...]
    columns: tuple[str, ...]
    cells: tuple[tuple[bool, ...], ...]
    row_kind: str
    column_kind: str
    relation: tuple[Step, ...]
    transitive: bool

    def cell(self, row: str, column: str) -> bool:
        return self.cells[self.rows.index(row)][self.columns.index(column)]


def trace_matrix(
    graph: TraceGraph,
    row_kind: str | EntityKind,
    column_kind: str | EntityKind,
    relation: Iterable[Step],
    transitive: bool = False,
) -> TraceMatrix:
    """Boolean grid of direct edges (or paths, when ``transitive``) from rows to columns."""
    row_kinds, col_kinds = kind_filter(row_kind), kind_filter(column_kind)
    relation = tuple(sorted(expand_steps(relation), key=lambda s: (s[0].value, s[1].value)))
    rows = tuple(n for n in graph.nodes if graph.node_kinds[n] in row_kinds)
    cols = tuple(n for n in graph.nodes if graph.node_kinds[n] in col_kinds)
    cells = []
    for r in rows:
        if transitive:
            hits = set(reachable(graph, [r], relation))
        else:
            hits = {m for kind, d in relation for m in graph.step(r, kind, d)}
        cells.append(tuple(c in hits for c in cols))
    return TraceMatrix(rows, cols, tuple(cells), _name(row_kind), _name(column_kind), relation, transitive)


def _name(kind: str | EntityKind) -> str:
    return kind.value if isinstance(kind, EntityKind) else kind

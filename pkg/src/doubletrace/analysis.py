"""Double-trace validation, vertex figures, repetitions, and edge classes.

A double trace is a closed walk covering every edge of the graph exactly
twice.  Its vertex figure at ``v`` joins two incident edges whenever they
occur consecutively through ``v``; a trace is strong exactly when every
vertex figure is a single cycle, and the cycle neighbor sets are the
minimal nonempty repetition sets.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import NamedTuple, Sequence

from .embedding import Embedding, FacialWalk, cycle_decomposition, embedding_from_walks
from .errors import (
    InternalInconsistency,
    NotANeighborSet,
    NotDoubleCover,
    NotStrong,
    WrongLength,
)
from .graph import Graph, Step, resolve_closed_walk


@dataclass(frozen=True)
class DoubleTrace:
    """A closed walk traversing every edge of its graph exactly twice."""

    graph: Graph
    steps: tuple[Step, ...]

    @property
    def vertices(self) -> tuple[int, ...]:
        return tuple(step.tail for step in self.steps)

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(self.graph.labels[v] for v in self.vertices)

    def __len__(self) -> int:
        return len(self.steps)

    def canonical(self) -> tuple[int, ...]:
        """Lexicographically minimal vertex sequence over all rotations of
        the walk and of its reversal."""
        return canonical_cyclic(self.vertices)

    @cached_property
    def _figures(self) -> tuple["VertexFigure", ...]:
        return tuple(_figure_at(self, v) for v in range(self.graph.vertex_count))


def canonical_cyclic(seq: Sequence[int]) -> tuple[int, ...]:
    best = None
    forward = tuple(seq)
    backward = tuple(reversed(forward))
    for candidate in (forward, backward):
        for k in range(len(candidate)):
            rotated = candidate[k:] + candidate[:k]
            if best is None or rotated < best:
                best = rotated
    return best if best is not None else ()


def validate_double_trace(g: Graph, walk: Sequence[int]) -> DoubleTrace:
    """Check a cyclic vertex sequence and resolve it into a DoubleTrace."""
    if len(walk) == 0:
        raise WrongLength("a double trace cannot be empty")
    steps = resolve_closed_walk(g, list(walk))
    counts = [0] * g.edge_count
    for st in steps:
        counts[st.edge] += 1
    bad = [e for e, c in enumerate(counts) if c != 2]
    if bad:
        detail = ", ".join(f"edge {e} used {counts[e]} times" for e in bad[:4])
        raise NotDoubleCover(detail)
    if len(steps) != 2 * g.edge_count:
        raise WrongLength(f"walk has {len(steps)} steps, expected {2 * g.edge_count}")
    return DoubleTrace(g, tuple(steps))


@dataclass(frozen=True)
class VertexFigure:
    """The 2-regular multigraph induced on E(v) by a double trace.

    ``pairs`` lists one unordered adjacency per passage through the vertex
    (a loop for an immediate turnaround); ``cycles`` is its decomposition.
    """

    vertex: int
    nodes: tuple[int, ...]
    pairs: tuple[tuple[int, int], ...]
    cycles: tuple[tuple[int, ...], ...]

    @property
    def cycle_count(self) -> int:
        return len(self.cycles)

    def neighbor_sets(self, g: Graph) -> tuple[frozenset[int], ...]:
        return tuple(
            frozenset(g.other_end(e, self.vertex) for e in cycle) for cycle in self.cycles
        )


def _figure_at(w: DoubleTrace, v: int) -> VertexFigure:
    g = w.graph
    ell = len(w.steps)
    links: list[tuple[int, int]] = []
    for i, st in enumerate(w.steps):
        if st.head != v:
            continue
        out_edge = w.steps[(i + 1) % ell].edge
        links.append((st.edge, out_edge))
    nodes = tuple(eid for eid, _ in g.incident(v))
    cycles = cycle_decomposition(nodes, links)
    pairs = tuple(sorted((min(a, b), max(a, b)) for a, b in links))
    return VertexFigure(v, nodes, pairs, tuple(tuple(c) for c in cycles))


def vertex_figure(w: DoubleTrace, v: int) -> VertexFigure:
    if not (0 <= v < w.graph.vertex_count):
        raise NotANeighborSet(f"vertex id {v} outside the graph")
    return w._figures[v]


def has_repetition(w: DoubleTrace, v: int, neighbor_set: Sequence[int]) -> bool:
    """Whether the walk enters ``v`` from the set exactly when it leaves into
    it, at every occurrence (cyclic indices)."""
    g = w.graph
    nset = frozenset(neighbor_set)
    if not nset <= g.neighbors(v):
        raise NotANeighborSet(f"{sorted(nset)} is not a subset of N({v})")
    ell = len(w.steps)
    for i, st in enumerate(w.steps):
        if st.head != v:
            continue
        came_from = st.tail
        goes_to = w.steps[(i + 1) % ell].head
        if (came_from in nset) != (goes_to in nset):
            return False
    return True


def repetition_structure(w: DoubleTrace, v: int) -> tuple[frozenset[int], ...]:
    """The minimal nonempty repetition sets at ``v``: the neighbor sets of
    its vertex-figure cycles.  Every repetition set is a union of these."""
    fig = vertex_figure(w, v)
    sets = fig.neighbor_sets(w.graph)
    return tuple(sorted(sets, key=lambda s: min(s)))


class Stability(NamedTuple):
    strong: bool
    max_stable_d: int | None  # None means unbounded (strong trace)


def stability(w: DoubleTrace) -> Stability:
    """Strongness plus the largest d for which the trace is d-stable.

    The minimal nontrivial repetition order at a multi-cycle vertex is the
    size of its smallest figure cycle; a strong trace has no nontrivial
    repetitions at all and is reported as unbounded.
    """
    worst: int | None = None
    for v in range(w.graph.vertex_count):
        fig = w._figures[v]
        if fig.cycle_count >= 2:
            smallest = min(len(c) for c in fig.cycles)
            worst = smallest if worst is None else min(worst, smallest)
    return Stability(worst is None, worst)


@dataclass(frozen=True)
class TraceReport:
    """Full verdict for one double trace."""

    strong: bool
    max_stable_d: int | None
    edge_kinds: tuple[str, ...]  # "parallel" | "antiparallel" per edge id
    parallel_trace: bool
    antiparallel_trace: bool
    vertex_cycle_counts: tuple[int, ...]
    vertex_min_orders: tuple[int | None, ...]
    vertex_repetition_sets: tuple[tuple[frozenset[int], ...], ...]

    def is_d_stable(self, d: int) -> bool:
        return self.strong or (self.max_stable_d is not None and self.max_stable_d >= d)

    def to_json_dict(self) -> dict:
        return {
            "strong": self.strong,
            "max_stable_d": "unbounded" if self.max_stable_d is None else self.max_stable_d,
            "edges": {str(e): kind for e, kind in enumerate(self.edge_kinds)},
            "vertices": {
                str(v): {
                    "cycles": self.vertex_cycle_counts[v],
                    "min_nontrivial_order": self.vertex_min_orders[v],
                }
                for v in range(len(self.vertex_cycle_counts))
            },
        }


def classify_edges(w: DoubleTrace) -> TraceReport:
    """Tag every edge parallel or antiparallel and assemble the report."""
    g = w.graph
    directions: list[list[tuple[int, int]]] = [[] for _ in range(g.edge_count)]
    for st in w.steps:
        directions[st.edge].append((st.tail, st.head))
    kinds = []
    for e, dirs in enumerate(directions):
        if len(dirs) != 2:
            raise InternalInconsistency(f"edge {e} traversed {len(dirs)} times")
        kinds.append("parallel" if dirs[0] == dirs[1] else "antiparallel")

    strong, max_d = stability(w)
    cycle_counts = []
    min_orders: list[int | None] = []
    rep_sets = []
    for v in range(g.vertex_count):
        fig = w._figures[v]
        cycle_counts.append(fig.cycle_count)
        min_orders.append(
            None if fig.cycle_count == 1 else min(len(c) for c in fig.cycles)
        )
        rep_sets.append(repetition_structure(w, v))

    return TraceReport(
        strong=strong,
        max_stable_d=max_d,
        edge_kinds=tuple(kinds),
        parallel_trace=all(k == "parallel" for k in kinds),
        antiparallel_trace=all(k == "antiparallel" for k in kinds),
        vertex_cycle_counts=tuple(cycle_counts),
        vertex_min_orders=tuple(min_orders),
        vertex_repetition_sets=tuple(rep_sets),
    )


def trace_to_embedding(w: DoubleTrace) -> Embedding:
    """The one-face embedding whose unique facial walk is this strong trace.

    The vertex figures supply the local rotations; multi-cycle figures make
    the construction impossible.
    """
    verdict = stability(w)
    if not verdict.strong:
        culprit = next(
            v for v in range(w.graph.vertex_count) if w._figures[v].cycle_count >= 2
        )
        raise NotStrong(
            f"vertex {w.graph.labels[culprit]!r} has a {w._figures[culprit].cycle_count}-cycle figure",
            vertex=culprit,
        )
    emb = embedding_from_walks(w.graph, [list(w.vertices)])
    faces = _canonical_faces(emb)
    if len(faces) != 1 or faces[0] != FacialWalk(w.steps).canonical():
        raise InternalInconsistency("one-face reconstruction does not trace the input walk")
    return emb


def _canonical_faces(emb: Embedding) -> list[tuple]:
    from .embedding import trace_faces

    return [f.canonical() for f in trace_faces(emb)]

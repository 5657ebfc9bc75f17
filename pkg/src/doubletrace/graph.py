"""Connected simple graphs with dense vertex and edge identifiers.

Vertices are integers ``0..n-1`` and edges carry ids ``0..m-1`` in
construction order; external labels are kept alongside for reporting.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, NamedTuple, Sequence

from .errors import (
    BudgetExceeded,
    NotAWalk,
    NotConnected,
    NotSimple,
    ParseError,
)

DEFAULT_TREE_BUDGET = 10**6


class Step(NamedTuple):
    """One edge traversal of a walk: ``tail --edge--> head``."""

    tail: int
    edge: int
    head: int


class Graph:
    """A connected simple graph with at least one edge."""

    __slots__ = ("vertex_count", "edges", "labels", "_adjacency", "_edge_ids")

    def __init__(
        self,
        vertex_count: int,
        edges: Sequence[tuple[int, int]],
        labels: Sequence[str] | None = None,
    ):
        if vertex_count < 2 or not edges:
            raise NotConnected("a graph needs at least two vertices and one edge")
        seen: dict[frozenset[int], int] = {}
        normalized: list[tuple[int, int]] = []
        for eid, (u, v) in enumerate(edges):
            if not (0 <= u < vertex_count and 0 <= v < vertex_count):
                raise ParseError(f"edge {eid} references a vertex outside 0..{vertex_count - 1}")
            if u == v:
                raise NotSimple(f"loop at vertex {u}")
            key = frozenset((u, v))
            if key in seen:
                raise NotSimple(f"duplicate edge {{{u}, {v}}}")
            seen[key] = eid
            normalized.append((min(u, v), max(u, v)))
        self.vertex_count = vertex_count
        self.edges: tuple[tuple[int, int], ...] = tuple(normalized)
        if labels is None:
            labels = [str(i) for i in range(vertex_count)]
        if len(labels) != vertex_count:
            raise ParseError("label map size does not match the vertex count")
        self.labels: tuple[str, ...] = tuple(labels)
        adjacency: list[list[tuple[int, int]]] = [[] for _ in range(vertex_count)]
        for eid, (u, v) in enumerate(self.edges):
            adjacency[u].append((eid, v))
            adjacency[v].append((eid, u))
        self._adjacency: tuple[tuple[tuple[int, int], ...], ...] = tuple(
            tuple(entries) for entries in adjacency
        )
        self._edge_ids = {frozenset(pair): eid for pair, eid in zip(self.edges, range(len(self.edges)))}
        self._check_connected()

    def _check_connected(self) -> None:
        seen = [False] * self.vertex_count
        stack = [0]
        seen[0] = True
        while stack:
            v = stack.pop()
            for _, w in self._adjacency[v]:
                if not seen[w]:
                    seen[w] = True
                    stack.append(w)
        if not all(seen):
            missing = seen.index(False)
            raise NotConnected(f"vertex {self.labels[missing]!r} is unreachable from {self.labels[0]!r}")

    # --- basic access -------------------------------------------------------

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def incident(self, v: int) -> tuple[tuple[int, int], ...]:
        """(edge id, neighbor) pairs at ``v``, sorted by edge id."""
        return self._adjacency[v]

    def degree(self, v: int) -> int:
        return len(self._adjacency[v])

    def neighbors(self, v: int) -> frozenset[int]:
        return frozenset(w for _, w in self._adjacency[v])

    def endpoints(self, e: int) -> tuple[int, int]:
        return self.edges[e]

    def other_end(self, e: int, v: int) -> int:
        u, w = self.edges[e]
        return w if v == u else u

    def edge_between(self, u: int, v: int) -> int | None:
        return self._edge_ids.get(frozenset((u, v)))

    def min_degree_vertex(self) -> tuple[int, int]:
        """(vertex, degree) with minimum degree, smallest id first."""
        v = min(range(self.vertex_count), key=lambda u: (self.degree(u), u))
        return v, self.degree(v)

    def max_degree(self) -> int:
        return max(self.degree(v) for v in range(self.vertex_count))

    def __repr__(self) -> str:
        return f"Graph({self.vertex_count} vertices, {self.edge_count} edges)"

    def to_json_dict(self) -> dict:
        return {
            "vertex_count": self.vertex_count,
            "edges": [list(pair) for pair in self.edges],
            "labels": {str(i): label for i, label in enumerate(self.labels)},
        }


def graph_from_edges(pairs: Sequence[tuple[int, int]], vertex_count: int | None = None) -> Graph:
    """Build a graph directly from integer vertex pairs."""
    if vertex_count is None:
        vertex_count = max(max(pair) for pair in pairs) + 1 if pairs else 0
    return Graph(vertex_count, list(pairs))


def parse_graph(text: str) -> Graph:
    """Parse an edge-list document: one edge per line, two whitespace-separated
    labels; ``#`` comments and blank lines are ignored."""
    label_ids: dict[str, int] = {}
    labels: list[str] = []
    edges: list[tuple[int, int]] = []

    def intern(token: str) -> int:
        if token not in label_ids:
            label_ids[token] = len(labels)
            labels.append(token)
        return label_ids[token]

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tokens = line.split()
        if len(tokens) != 2:
            raise ParseError(f"line {lineno}: expected two vertex labels, got {len(tokens)}")
        edges.append((intern(tokens[0]), intern(tokens[1])))
    if not edges:
        raise ParseError("no edges found in input")
    return Graph(len(labels), edges, labels)


def resolve_closed_walk(g: Graph, vertices: Sequence[int]) -> list[Step]:
    """Resolve a cyclic vertex sequence into edge traversals.

    Legal because the graph is simple: a vertex pair names one edge.
    """
    steps: list[Step] = []
    ell = len(vertices)
    for i, tail in enumerate(vertices):
        head = vertices[(i + 1) % ell]
        eid = g.edge_between(tail, head)
        if eid is None:
            raise NotAWalk(
                f"vertices {g.labels[tail]!r} and {g.labels[head]!r} are not adjacent"
            )
        steps.append(Step(tail, eid, head))
    return steps


# --- structural predicates --------------------------------------------------


def betti(g: Graph) -> int:
    """Cycle-space dimension |E| - |V| + 1 of a connected graph."""
    return g.edge_count - g.vertex_count + 1


def is_eulerian(g: Graph) -> bool:
    """True when every vertex has even degree."""
    return all(g.degree(v) % 2 == 0 for v in range(g.vertex_count))


def cut_edges(g: Graph) -> frozenset[int]:
    """Edge ids of all bridges, found by one depth-first low-link pass."""
    n = g.vertex_count
    disc = [-1] * n
    low = [0] * n
    parent_edge = [-1] * n
    iters: list = [None] * n
    bridges: set[int] = set()

    disc[0] = low[0] = 0
    timer = 1
    iters[0] = iter(g.incident(0))
    stack = [0]
    while stack:
        v = stack[-1]
        for eid, w in iters[v]:
            if eid == parent_edge[v]:
                continue
            if disc[w] == -1:
                parent_edge[w] = eid
                disc[w] = low[w] = timer
                timer += 1
                iters[w] = iter(g.incident(w))
                stack.append(w)
                break
            low[v] = min(low[v], disc[w])
        else:
            stack.pop()
            if stack:
                p = stack[-1]
                low[p] = min(low[p], low[v])
                if low[v] > disc[p]:
                    bridges.add(parent_edge[v])
    return frozenset(bridges)


@dataclass(frozen=True)
class SpanningTree:
    """A spanning tree given by its edge ids; the cotree is the complement."""

    tree_edge_ids: frozenset[int]
    cotree_edge_ids: frozenset[int]


def spanning_trees(g: Graph, budget: int = DEFAULT_TREE_BUDGET) -> Iterator[SpanningTree]:
    """Yield every spanning tree exactly once, in lexicographic edge order.

    Backtracks over include/exclude decisions per edge id with a rollback
    union-find.  Raises BudgetExceeded before yielding tree ``budget + 1``.
    """
    n, m = g.vertex_count, g.edge_count
    target = n - 1
    all_edges = frozenset(range(m))

    parent = list(range(n))
    size = [1] * n

    def find(x: int) -> int:
        while parent[x] != x:
            x = parent[x]
        return x

    chosen: list[int] = []
    emitted = 0

    def rec(i: int) -> Iterator[SpanningTree]:
        nonlocal emitted
        if len(chosen) == target:
            if emitted >= budget:
                raise BudgetExceeded(f"spanning tree budget of {budget} exhausted")
            emitted += 1
            tree = frozenset(chosen)
            yield SpanningTree(tree, all_edges - tree)
            return
        if i == m or target - len(chosen) > m - i:
            return
        u, v = g.edges[i]
        ru, rv = find(u), find(v)
        if ru != rv:
            if size[ru] < size[rv]:
                ru, rv = rv, ru
            parent[rv] = ru
            size[ru] += size[rv]
            chosen.append(i)
            yield from rec(i + 1)
            chosen.pop()
            parent[rv] = rv
            size[ru] -= size[rv]
        yield from rec(i + 1)

    yield from rec(0)


def cotree_components_even(g: Graph, tree: SpanningTree) -> bool:
    """True when every component of the cotree subgraph has an even edge count.

    Isolated vertices count as components with zero edges.
    """
    n = g.vertex_count
    parent = list(range(n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for eid in tree.cotree_edge_ids:
        u, v = g.edges[eid]
        parent[find(u)] = find(v)
    counts: dict[int, int] = {}
    for eid in tree.cotree_edge_ids:
        root = find(g.edges[eid][0])
        counts[root] = counts.get(root, 0) + 1
    return all(c % 2 == 0 for c in counts.values())

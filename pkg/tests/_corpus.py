"""Shared fixtures and independent oracles for the test suite."""

from __future__ import annotations

import itertools
from fractions import Fraction
from functools import lru_cache

from doubletrace import Graph, graph_from_edges


def cycle_graph(k: int) -> Graph:
    return graph_from_edges([(i, (i + 1) % k) for i in range(k)])


def path_graph(k: int) -> Graph:
    return graph_from_edges([(i, i + 1) for i in range(k - 1)])


def complete_graph(k: int) -> Graph:
    return graph_from_edges([(i, j) for i in range(k) for j in range(i + 1, k)])


def star_graph(k: int) -> Graph:
    return graph_from_edges([(0, i) for i in range(1, k + 1)])


def bowtie_graph() -> Graph:
    # two triangles 0-1-2 and 0-3-4 sharing vertex 0
    return graph_from_edges([(0, 1), (0, 2), (1, 2), (0, 3), (0, 4), (3, 4)])


def triple_bowtie_graph() -> Graph:
    # three triangles sharing vertex 0: a degree-6 hub
    return graph_from_edges(
        [(0, 1), (0, 2), (1, 2), (0, 3), (0, 4), (3, 4), (0, 5), (0, 6), (5, 6)]
    )


def cube_graph() -> Graph:
    return graph_from_edges(
        [
            (0, 1), (0, 2), (0, 4), (1, 3), (1, 5), (2, 3),
            (2, 6), (3, 7), (4, 5), (4, 6), (5, 7), (6, 7),
        ]
    )


@lru_cache(maxsize=None)
def atlas_corpus(max_vertices: int = 7) -> tuple[Graph, ...]:
    """All connected simple graphs on 2..max_vertices vertices, one per
    isomorphism class, from the networkx graph atlas."""
    import networkx as nx
    from networkx.generators.atlas import graph_atlas_g

    out = []
    for G in graph_atlas_g():
        n = G.number_of_nodes()
        if n < 2 or n > max_vertices:
            continue
        if not nx.is_connected(G):
            continue
        relabel = {node: i for i, node in enumerate(sorted(G.nodes()))}
        edges = sorted(
            (min(relabel[u], relabel[v]), max(relabel[u], relabel[v]))
            for u, v in G.edges()
        )
        out.append(Graph(n, edges))
    return tuple(out)


# --- independent oracles ------------------------------------------------------


def connected_after_removal(g: Graph, eid: int) -> bool:
    """Direct traversal recheck used as the bridge oracle."""
    n = g.vertex_count
    seen = [False] * n
    seen[0] = True
    stack = [0]
    while stack:
        v = stack.pop()
        for e, w in g.incident(v):
            if e != eid and not seen[w]:
                seen[w] = True
                stack.append(w)
    return all(seen)


def matrix_tree_count(g: Graph) -> int:
    """Spanning-tree count via the Kirchhoff determinant, in exact rationals."""
    n = g.vertex_count
    lap = [[Fraction(0)] * n for _ in range(n)]
    for u, v in g.edges:
        lap[u][u] += 1
        lap[v][v] += 1
        lap[u][v] -= 1
        lap[v][u] -= 1
    size = n - 1  # delete last row and column
    mat = [row[:size] for row in lap[:size]]
    det = Fraction(1)
    for col in range(size):
        pivot = next((r for r in range(col, size) if mat[r][col] != 0), None)
        if pivot is None:
            return 0
        if pivot != col:
            mat[col], mat[pivot] = mat[pivot], mat[col]
            det = -det
        det *= mat[col][col]
        inv = 1 / mat[col][col]
        for r in range(col + 1, size):
            factor = mat[r][col] * inv
            if factor:
                for c in range(col, size):
                    mat[r][c] -= factor * mat[col][c]
    assert det.denominator == 1
    return abs(int(det))


def all_rotation_systems(g: Graph):
    """Every rotation system, one representative per cyclic order."""
    candidates = []
    for v in range(g.vertex_count):
        incident = [eid for eid, _ in g.incident(v)]
        first, rest = incident[0], incident[1:]
        candidates.append([(first,) + p for p in itertools.permutations(rest)])
    yield from itertools.product(*candidates)


def all_signatures(g: Graph):
    yield from itertools.product((1, -1), repeat=g.edge_count)


def positive_face_count(g: Graph, rotation) -> int:
    """Independent face counter for all-positive embeddings: orbits of the
    predecessor rule on directed edges."""
    prev = []
    for order in rotation:
        d = len(order)
        prev.append({order[i]: order[i - 1] for i in range(d)})
    m = g.edge_count
    visited = [False] * (2 * m)
    faces = 0
    for start in range(2 * m):
        if visited[start]:
            continue
        faces += 1
        sid = start
        while not visited[sid]:
            visited[sid] = True
            e, hd = sid >> 1, sid & 1
            v = g.edges[e][hd]
            f = prev[v][e]
            fu, _ = g.edges[f]
            sid = (f << 1) | (1 if fu == v else 0)
    return faces


def has_positive_one_face(g: Graph) -> bool:
    """Brute force over all rotation systems for an orientable one-face
    embedding (signatures all +1)."""
    return any(positive_face_count(g, rot) == 1 for rot in all_rotation_systems(g))

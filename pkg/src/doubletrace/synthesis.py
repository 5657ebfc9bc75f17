"""Constructions: double traces, strong traces, one-face embeddings,
parallel and antiparallel variants, and exhaustive enumeration.

Every construction re-verifies its output through the analysis module
before returning it; certificates never carry an unverified verdict.
"""

from __future__ import annotations

import itertools
from collections import deque
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from random import Random
from typing import Callable, Sequence

from .analysis import (
    DoubleTrace,
    TraceReport,
    canonical_cyclic,
    classify_edges,
    stability,
    validate_double_trace,
)
from .embedding import (
    Embedding,
    SurfaceDescriptor,
    flip_signature,
    is_orientable,
    single_face_walk,
    surface_of,
    trace_faces,
)
from .errors import (
    BudgetExceeded,
    DegreeTooSmall,
    InternalInconsistency,
    IsATree,
    NoSuchTrace,
    NotEulerian,
)
from .graph import (
    DEFAULT_TREE_BUDGET,
    Graph,
    SpanningTree,
    Step,
    betti,
    cotree_components_even,
    cut_edges,
    spanning_trees,
)

DEFAULT_NODE_BUDGET = 10**7


@dataclass(frozen=True)
class ConstructionCertificate:
    """A constructed object bundled with its re-derived verification."""

    kind: str
    trace: DoubleTrace | None
    embedding: Embedding | None
    witness: dict
    verified: bool
    surface: SurfaceDescriptor | None
    report: TraceReport | None

    def to_json_dict(self) -> dict:
        trace_labels = None
        if self.trace is not None:
            trace_labels = [self.trace.graph.labels[v] for v in self.trace.canonical()]
        return {
            "kind": self.kind,
            "trace": trace_labels,
            "embedding": None if self.embedding is None else self.embedding.to_json_dict(),
            "witness": self.witness,
            "verified": self.verified,
            "surface": None if self.surface is None else self.surface.to_json_dict(),
        }


# --- plain double traces ------------------------------------------------------


def _slot_tour(slots: dict[int, list[tuple[tuple, int, int]]], start: int) -> list[Step]:
    """End-pairing (stack) tour over edge slots; each slot is traversed once.

    ``slots[v]`` holds (slot key, edge id, neighbor) triples; a slot is
    consumed globally when either endpoint uses it.
    """
    used: set[tuple] = set()
    pointers = {v: 0 for v in slots}
    stack: list[tuple[int, int | None]] = [(start, None)]
    popped: list[tuple[int, int | None]] = []
    while stack:
        v, incoming = stack[-1]
        advanced = False
        while pointers[v] < len(slots[v]):
            key, eid, w = slots[v][pointers[v]]
            pointers[v] += 1
            if key in used:
                continue
            used.add(key)
            stack.append((w, eid))
            advanced = True
            break
        if not advanced:
            popped.append(stack.pop())
    popped.reverse()
    steps = []
    for (v, _), (w, eid) in zip(popped, popped[1:]):
        steps.append(Step(v, eid, w))
    return steps


def _euler_tour(g: Graph, rng: Random | None = None) -> list[Step]:
    """A closed walk using every edge exactly once (graph must be Eulerian)."""
    slots = {
        v: [((eid,), eid, w) for eid, w in g.incident(v)] for v in range(g.vertex_count)
    }
    if rng is not None:
        for v in slots:
            rng.shuffle(slots[v])
    return _slot_tour(slots, 0)


def any_double_trace(g: Graph, rng: Random | None = None) -> DoubleTrace:
    """A double trace of any connected graph: tour the doubled multigraph.

    With ``rng`` the per-vertex slot order is shuffled, giving a randomized
    but still valid trace; otherwise the result is deterministic.
    """
    slots = {
        v: [((eid, c), eid, w) for eid, w in g.incident(v) for c in (0, 1)]
        for v in range(g.vertex_count)
    }
    if rng is not None:
        for v in slots:
            rng.shuffle(slots[v])
    steps = _slot_tour(slots, 0)
    return validate_double_trace(g, [st.tail for st in steps])


# --- strong traces via one-face embeddings ------------------------------------


def _one_face_with_flips(
    g: Graph, observer: Callable | None = None
) -> tuple[Embedding, list[int], int]:
    rotation = tuple(
        tuple(eid for eid, _ in g.incident(v)) for v in range(g.vertex_count)
    )
    emb = Embedding(g, rotation, (1,) * g.edge_count)
    faces = trace_faces(emb)
    initial = len(faces)
    if observer is not None:
        observer(emb, faces)
    flips: list[int] = []
    while len(faces) > 1:
        edge_faces: dict[int, set[int]] = {}
        for idx, face in enumerate(faces):
            for st in face.steps:
                edge_faces.setdefault(st.edge, set()).add(idx)
        shared = sorted(e for e, owners in edge_faces.items() if len(owners) == 2)
        if not shared:
            raise InternalInconsistency("multiple faces but no edge on two of them")
        emb = flip_signature(emb, shared[0])
        flips.append(shared[0])
        new_faces = trace_faces(emb)
        if len(new_faces) != len(faces) - 1:
            raise InternalInconsistency("a signature flip did not merge exactly two faces")
        faces = new_faces
        if observer is not None:
            observer(emb, faces)
    return emb, flips, initial


def one_face_embedding(g: Graph, observer: Callable | None = None) -> Embedding:
    """An embedding of ``g`` with a single facial walk.

    Starts from identity rotations with all-positive signs and repeatedly
    flips the smallest edge shared by two distinct faces; each flip merges
    them, so the loop ends after (initial face count - 1) flips.
    """
    emb, _, _ = _one_face_with_flips(g, observer)
    return emb


def strong_trace(g: Graph) -> ConstructionCertificate:
    """A strong trace of any connected graph: the facial walk of a one-face
    embedding, re-verified through the vertex-figure criterion."""
    emb, flips, initial = _one_face_with_flips(g)
    walk = trace_faces(emb)[0]
    trace = validate_double_trace(g, list(walk.vertices))
    report = classify_edges(trace)
    if not report.strong:
        raise InternalInconsistency("one-face facial walk failed the strongness check")
    return ConstructionCertificate(
        kind="strong",
        trace=trace,
        embedding=emb,
        witness={"flipped_edges": flips, "initial_face_count": initial},
        verified=True,
        surface=surface_of(emb),
        report=report,
    )


def nonorientable_one_face(g: Graph) -> Embedding:
    """A one-face embedding into a nonorientable surface.

    Requires a cycle: flipping the sign of a non-cut edge of an orientable
    one-face embedding reverses the subwalk between its two traversals,
    keeping one face while making some cycle odd-signed.
    """
    if betti(g) == 0:
        raise IsATree("trees admit no nonorientable one-face embedding")
    emb, _, _ = _one_face_with_flips(g)
    if not is_orientable(emb):
        return emb
    bridges = cut_edges(g)
    candidate = min(e for e in range(g.edge_count) if e not in bridges)
    emb = flip_signature(emb, candidate)
    faces = trace_faces(emb)
    if len(faces) != 1 or is_orientable(emb):
        raise InternalInconsistency("non-cut-edge flip lost the one-face property")
    return emb


def d_stable_trace(g: Graph, d: int) -> ConstructionCertificate:
    """A d-stable trace, which exists exactly when the minimum degree
    exceeds ``d``; a strong trace then qualifies."""
    if d < 1:
        raise ValueError("d must be a positive integer")
    v, delta = g.min_degree_vertex()
    if delta <= d:
        raise DegreeTooSmall(
            f"vertex {g.labels[v]!r} has degree {delta} <= d = {d}", vertex=v, degree=delta
        )
    cert = strong_trace(g)
    if not cert.report.is_d_stable(d):
        raise InternalInconsistency("strong trace failed its own d-stability check")
    witness = dict(cert.witness)
    witness.update({"d": d, "min_degree": delta})
    return ConstructionCertificate(
        kind="d-stable",
        trace=cert.trace,
        embedding=cert.embedding,
        witness=witness,
        verified=True,
        surface=cert.surface,
        report=cert.report,
    )


# --- antiparallel strong traces ------------------------------------------------


@dataclass(frozen=True)
class AntiparallelDecision:
    exists: bool
    witness: SpanningTree | None
    reason: str | None
    trees_examined: int


def antiparallel_decision(
    g: Graph, tree_budget: int = DEFAULT_TREE_BUDGET
) -> AntiparallelDecision:
    """Decide existence of an antiparallel strong trace.

    Exists exactly when some spanning tree leaves a cotree whose components
    all have an even number of edges.  An odd Betti number refuses without
    enumerating (the cotree always has beta(G) edges, so even components
    are impossible, matching the parity of orientable face counts).
    """
    if betti(g) % 2 == 1:
        return AntiparallelDecision(False, None, "odd betti number", 0)
    examined = 0
    for tree in spanning_trees(g, budget=tree_budget):
        examined += 1
        if cotree_components_even(g, tree):
            return AntiparallelDecision(True, tree, None, examined)
    return AntiparallelDecision(
        False, None, "no spanning tree with all-even cotree components", examined
    )


def _bfs_vertex_order(g: Graph) -> list[int]:
    order = [0]
    seen = [False] * g.vertex_count
    seen[0] = True
    queue = deque([0])
    while queue:
        v = queue.popleft()
        for _, w in g.incident(v):
            if not seen[w]:
                seen[w] = True
                order.append(w)
                queue.append(w)
    return order


def _search_orientable_one_face(
    g: Graph, node_budget: int
) -> tuple[tuple[tuple[int, ...], ...], list[Step]] | None:
    """Backtracking over rotation systems (all-positive signs) for a single
    facial walk covering every directed edge.

    Prunes a partial assignment as soon as it closes a facial orbit shorter
    than 2|E|: extending rotations never reopens a closed orbit.
    """
    m = g.edge_count
    target = 2 * m
    edges = g.edges
    order = _bfs_vertex_order(g)
    assigned = [False] * g.vertex_count
    prev_map: list[dict[int, int] | None] = [None] * g.vertex_count
    nodes = 0

    def closed_orbit_prune() -> bool:
        visited = [False] * (2 * m)
        for start in range(2 * m):
            if visited[start]:
                continue
            sid = start
            while True:
                visited[sid] = True
                e, hd = sid >> 1, sid & 1
                v = edges[e][hd]
                if not assigned[v]:
                    break
                f = prev_map[v][e]
                fu, fv = edges[f]
                nsid = (f << 1) | (1 if fu == v else 0)
                if nsid == start:
                    if len_of_orbit(start) < target:
                        return True
                    break
                if visited[nsid]:
                    break
                sid = nsid
        return False

    def len_of_orbit(start: int) -> int:
        count = 0
        sid = start
        while True:
            count += 1
            e, hd = sid >> 1, sid & 1
            v = edges[e][hd]
            f = prev_map[v][e]
            fu, fv = edges[f]
            sid = (f << 1) | (1 if fu == v else 0)
            if sid == start:
                return count

    def extract_walk() -> list[Step] | None:
        sid = 0
        steps: list[Step] = []
        for _ in range(target):
            e, hd = sid >> 1, sid & 1
            v = edges[e][hd]
            steps.append(Step(g.other_end(e, v), e, v))
            f = prev_map[v][e]
            fu, fv = edges[f]
            sid = (f << 1) | (1 if fu == v else 0)
        return steps if sid == 0 and len({st.edge for st in steps}) == m else None

    result: dict = {}

    def dfs(k: int) -> bool:
        nonlocal nodes
        if k == len(order):
            walk = extract_walk()
            if walk is None:
                return False
            result["rotation"] = tuple(
                tuple(_rotation_from_prev(prev_map[v], g, v)) for v in range(g.vertex_count)
            )
            result["walk"] = walk
            return True
        v = order[k]
        incident = [eid for eid, _ in g.incident(v)]
        first, rest = incident[0], incident[1:]
        for perm in itertools.permutations(rest):
            nodes += 1
            if nodes > node_budget:
                raise BudgetExceeded(f"rotation search budget of {node_budget} exhausted")
            cyc = (first,) + perm
            prev_map[v] = {cyc[i]: cyc[i - 1] for i in range(len(cyc))}
            assigned[v] = True
            if not closed_orbit_prune():
                if dfs(k + 1):
                    return True
            assigned[v] = False
            prev_map[v] = None
        return False

    if dfs(0):
        return result["rotation"], result["walk"]
    return None


def _rotation_from_prev(prev: dict[int, int], g: Graph, v: int) -> list[int]:
    start = min(prev)
    out = [start]
    # invert the predecessor map back into cyclic successor order
    succ = {p: e for e, p in prev.items()}
    cur = succ[start]
    while cur != start:
        out.append(cur)
        cur = succ[cur]
    return out


def antiparallel_strong_trace(
    g: Graph,
    tree_budget: int = DEFAULT_TREE_BUDGET,
    node_budget: int = DEFAULT_NODE_BUDGET,
) -> ConstructionCertificate:
    """An antiparallel strong trace, i.e. the facial walk of a one-face
    embedding in an orientable surface.

    The spanning-tree certificate gates the search: a refusal is exact, and
    after a positive decision the rotation search must succeed.
    """
    decision = antiparallel_decision(g, tree_budget=tree_budget)
    if not decision.exists:
        raise NoSuchTrace(
            f"no antiparallel strong trace: {decision.reason}", reason=decision.reason
        )
    found = _search_orientable_one_face(g, node_budget)
    if found is None:
        raise InternalInconsistency(
            "certified antiparallel decision but the rotation search found no one-face embedding"
        )
    rotation, steps = found
    emb = Embedding(g, rotation, (1,) * g.edge_count)
    trace = validate_double_trace(g, [st.tail for st in steps])
    report = classify_edges(trace)
    if not (report.strong and report.antiparallel_trace):
        raise InternalInconsistency("orientable one-face walk failed verification")
    surface = surface_of(emb)
    if not surface.orientable or surface.face_count != 1:
        raise InternalInconsistency("antiparallel construction produced the wrong surface")
    return ConstructionCertificate(
        kind="antiparallel-strong",
        trace=trace,
        embedding=emb,
        witness={"spanning_tree": sorted(decision.witness.tree_edge_ids)},
        verified=True,
        surface=surface,
        report=report,
    )


def antiparallel_1stable_decision(
    g: Graph, tree_budget: int = DEFAULT_TREE_BUDGET
) -> bool:
    """Decide existence of an antiparallel 1-stable trace: minimum degree
    above one, plus a spanning tree each of whose cotree components has an
    even edge count or a vertex of degree at least 4 in the graph."""
    _, delta = g.min_degree_vertex()
    if delta <= 1:
        return False
    for tree in spanning_trees(g, budget=tree_budget):
        if _cotree_components_even_or_deg4(g, tree):
            return True
    return False


def _cotree_components_even_or_deg4(g: Graph, tree: SpanningTree) -> bool:
    parent = list(range(g.vertex_count))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for eid in tree.cotree_edge_ids:
        u, v = g.edges[eid]
        parent[find(u)] = find(v)
    edge_counts: dict[int, int] = {}
    members: dict[int, set[int]] = {}
    for eid in tree.cotree_edge_ids:
        u, v = g.edges[eid]
        root = find(u)
        edge_counts[root] = edge_counts.get(root, 0) + 1
        members.setdefault(root, set()).update((u, v))
    for root, count in edge_counts.items():
        if count % 2 == 0:
            continue
        if not any(g.degree(v) >= 4 for v in members[root]):
            return False
    return True


# --- parallel strong traces -----------------------------------------------------


@dataclass(frozen=True)
class SwapEvent:
    """One subwalk interchange of the parallel strong-trace construction."""

    vertex: int
    e1: int
    e2: int
    e3: int
    f4: int
    f5: int
    cycles_before: int
    cycles_after: int


def _total_figure_cycles(trace: DoubleTrace) -> int:
    return sum(trace._figures[v].cycle_count for v in range(trace.graph.vertex_count))


def parallel_strong_trace(
    g: Graph, observer: Callable[[SwapEvent], None] | None = None
) -> ConstructionCertificate:
    """A parallel strong trace of an Eulerian graph.

    Seeds with an Euler tour traversed twice (all edges parallel, every
    vertex figure a union of 2-cycles) and repeatedly interchanges two
    subwalks through a vertex whose figure still has two cycles; each
    interchange merges exactly two figure cycles and preserves every edge
    direction.
    """
    odd = [v for v in range(g.vertex_count) if g.degree(v) % 2 == 1]
    if odd:
        raise NotEulerian(
            f"vertex {g.labels[odd[0]]!r} has odd degree {g.degree(odd[0])}", vertex=odd[0]
        )
    tour = _euler_tour(g)
    trace = validate_double_trace(g, [st.tail for st in tour] * 2)
    swaps = 0
    while True:
        total = _total_figure_cycles(trace)
        multi = [
            v for v in range(g.vertex_count) if trace._figures[v].cycle_count >= 2
        ]
        if not multi:
            break
        v = min(multi)
        trace, event = _merge_two_cycles(g, trace, v, total)
        swaps += 1
        if observer is not None:
            observer(event)

    report = classify_edges(trace)
    if not (report.strong and report.parallel_trace):
        raise InternalInconsistency("parallel construction failed verification")
    return ConstructionCertificate(
        kind="parallel-strong",
        trace=trace,
        embedding=None,
        witness={"euler_tour": [g.labels[st.tail] for st in tour], "swaps": swaps},
        verified=True,
        surface=None,
        report=report,
    )


def _merge_two_cycles(
    g: Graph, trace: DoubleTrace, v: int, total_before: int
) -> tuple[DoubleTrace, SwapEvent]:
    steps = trace.steps
    ell = len(steps)
    fig = trace._figures[v]
    cycle_of: dict[int, int] = {}
    for ci, cyc in enumerate(fig.cycles):
        for e in cyc:
            cycle_of[e] = ci

    inbound = sorted(
        e
        for e, _ in g.incident(v)
        if all(st.head == v for st in steps if st.edge == e)
    )
    if not inbound:
        raise InternalInconsistency("parallel trace with no inbound edge at a vertex")
    e1 = inbound[0]
    c1 = cycle_of[e1]
    other_edges = sorted(e for e, _ in g.incident(v) if cycle_of[e] != c1)
    c2 = cycle_of[other_edges[0]]
    c2_edges = set(fig.cycles[c2])

    arrivals = [i for i, st in enumerate(steps) if st.head == v and st.edge == e1]
    if len(arrivals) != 2:
        raise InternalInconsistency("edge of a parallel trace without two arrivals")
    p1, p2 = arrivals
    k = min(i for i, st in enumerate(steps) if st.head == v and st.edge in c2_edges)
    # pick (i, j) so the cyclic order along the walk is i, j, k
    if p1 < k < p2:
        i, j = p2, p1
    else:
        i, j = p1, p2

    rot = steps[i + 1 :] + steps[: i + 1]
    len_a = (j - i) % ell
    len_b = (k - j) % ell
    seg_a, seg_b, seg_c = rot[:len_a], rot[len_a : len_a + len_b], rot[len_a + len_b :]
    new_steps = seg_b + seg_a + seg_c
    new_trace = validate_double_trace(g, [st.tail for st in new_steps])
    total_after = _total_figure_cycles(new_trace)
    if total_after != total_before - 1:
        raise InternalInconsistency("subwalk interchange did not merge exactly two cycles")
    event = SwapEvent(
        vertex=v,
        e1=e1,
        e2=seg_a[0].edge,
        e3=seg_b[0].edge,
        f4=seg_b[-1].edge,
        f5=seg_c[0].edge,
        cycles_before=total_before,
        cycles_after=total_after,
    )
    return new_trace, event


def parallel_d_stable_trace(
    g: Graph, d: int, observer: Callable[[SwapEvent], None] | None = None
) -> ConstructionCertificate:
    """A parallel d-stable trace: exists exactly when the graph is Eulerian
    and the minimum degree exceeds ``d``."""
    if d < 1:
        raise ValueError("d must be a positive integer")
    odd = [v for v in range(g.vertex_count) if g.degree(v) % 2 == 1]
    if odd:
        raise NotEulerian(
            f"vertex {g.labels[odd[0]]!r} has odd degree {g.degree(odd[0])}", vertex=odd[0]
        )
    v, delta = g.min_degree_vertex()
    if delta <= d:
        raise DegreeTooSmall(
            f"vertex {g.labels[v]!r} has degree {delta} <= d = {d}", vertex=v, degree=delta
        )
    cert = parallel_strong_trace(g, observer)
    if not cert.report.is_d_stable(d):
        raise InternalInconsistency("parallel strong trace failed its d-stability check")
    witness = dict(cert.witness)
    witness.update({"d": d, "min_degree": delta})
    return ConstructionCertificate(
        kind="parallel-d-stable",
        trace=cert.trace,
        embedding=None,
        witness=witness,
        verified=True,
        surface=None,
        report=cert.report,
    )


# --- enumeration ----------------------------------------------------------------


def graph_automorphisms(g: Graph) -> list[tuple[int, ...]]:
    """All adjacency-preserving vertex permutations, by backtracking."""
    n = g.vertex_count
    adj = [g.neighbors(v) for v in range(n)]
    degs = [g.degree(v) for v in range(n)]
    image = [-1] * n
    used = [False] * n
    out: list[tuple[int, ...]] = []

    def rec(v: int) -> None:
        if v == n:
            out.append(tuple(image))
            return
        for t in range(n):
            if used[t] or degs[t] != degs[v]:
                continue
            if any((u in adj[v]) != (image[u] in adj[t]) for u in range(v)):
                continue
            image[v] = t
            used[t] = True
            rec(v + 1)
            used[t] = False
            image[v] = -1

    rec(0)
    return out


class _Truncated(Exception):
    pass


class _StrongTraceSearch:
    """Backtracking enumeration of strong traces anchored at edge 0.

    Extends a closed walk step by step; at each passage through a vertex the
    consecutive-edge pair is added to that vertex's partial figure, pruning
    whenever a node exceeds two link endpoints or a cycle closes before
    covering all incident edges.
    """

    def __init__(self, g: Graph):
        self.g = g
        self.m = g.edge_count
        self.ell = 2 * g.edge_count
        self.incident = [g.incident(v) for v in range(g.vertex_count)]
        self.loc = [
            {eid: idx for idx, (eid, _) in enumerate(g.incident(v))}
            for v in range(g.vertex_count)
        ]

    def _reset(self):
        g = self.g
        n = g.vertex_count
        self.edge_used = [0] * self.m
        self.parent = [list(range(g.degree(v))) for v in range(n)]
        self.size = [[1] * g.degree(v) for v in range(n)]
        self.slot_deg = [[0] * g.degree(v) for v in range(n)]
        self.links = [0] * n
        self.path: list[int] = []
        self.found: set[tuple[int, ...]] = set()
        self.nodes = 0

    def _find(self, v: int, x: int) -> int:
        parent = self.parent[v]
        while parent[x] != x:
            x = parent[x]
        return x

    def _add_link(self, v: int, e_in: int, e_out: int):
        """Returns an undo record, or None when the pair is infeasible."""
        ia = self.loc[v][e_in]
        ib = self.loc[v][e_out]
        deg = len(self.parent[v])
        sd = self.slot_deg[v]
        if ia == ib:
            if deg != 1 or sd[ia] != 0:
                return None
            sd[ia] = 2
            self.links[v] += 1
            return (v, ia, ib, -1, -1)
        if sd[ia] >= 2 or sd[ib] >= 2:
            return None
        ra, rb = self._find(v, ia), self._find(v, ib)
        if ra == rb:
            if self.links[v] != deg - 1:
                return None  # would close a cycle missing some edges
            sd[ia] += 1
            sd[ib] += 1
            self.links[v] += 1
            return (v, ia, ib, -1, -1)
        if self.size[v][ra] < self.size[v][rb]:
            ra, rb = rb, ra
        self.parent[v][rb] = ra
        self.size[v][ra] += self.size[v][rb]
        sd[ia] += 1
        sd[ib] += 1
        self.links[v] += 1
        return (v, ia, ib, rb, ra)

    def _undo_link(self, record) -> None:
        v, ia, ib, rb, ra = record
        sd = self.slot_deg[v]
        if ia == ib:
            sd[ia] = 0
        else:
            sd[ia] -= 1
            sd[ib] -= 1
        self.links[v] -= 1
        if rb != -1:
            self.parent[v][rb] = rb
            self.size[v][ra] -= self.size[v][rb]

    def run_cell(self, cell: tuple[int, int], cap: int) -> tuple[set, int, bool]:
        """Explore one (start vertex, second edge) cell of the search space."""
        self._reset()
        start, second = cell
        g = self.g
        v1 = g.other_end(0, start)
        self.start = start
        self.edge_used[0] = 1
        self.path = [start, v1]
        truncated = False
        if self.edge_used[second] < 2:
            record = self._add_link(v1, 0, second)
            if record is not None:
                self.edge_used[second] += 1
                w = g.other_end(second, v1)
                self.path.append(w)
                try:
                    self._extend(w, second, 2, cap)
                except _Truncated:
                    truncated = True
                self.path.pop()
                self.edge_used[second] -= 1
                self._undo_link(record)
        return self.found, self.nodes, truncated

    def _extend(self, cur: int, prev_edge: int, depth: int, cap: int) -> None:
        self.nodes += 1
        if self.nodes > cap:
            raise _Truncated
        if depth == self.ell:
            if cur != self.start:
                return
            record = self._add_link(self.start, prev_edge, 0)
            if record is not None:
                self.found.add(canonical_cyclic(self.path[: self.ell]))
                self._undo_link(record)
            return
        last = depth == self.ell - 1
        for eid, w in self.incident[cur]:
            if self.edge_used[eid] == 2:
                continue
            if last and w != self.start:
                continue
            record = self._add_link(cur, prev_edge, eid)
            if record is None:
                continue
            self.edge_used[eid] += 1
            self.path.append(w)
            self._extend(w, eid, depth + 1, cap)
            self.path.pop()
            self.edge_used[eid] -= 1
            self._undo_link(record)


def _search_cells(g: Graph) -> list[tuple[int, int]]:
    cells = []
    for start in sorted(g.endpoints(0)):
        v1 = g.other_end(0, start)
        for eid, _ in g.incident(v1):
            cells.append((start, eid))
    return cells


def _walk_cells_worker(payload) -> tuple[set, int, bool]:
    vertex_count, edges, cells, cap = payload
    g = Graph(vertex_count, list(edges))
    search = _StrongTraceSearch(g)
    merged: set = set()
    nodes = 0
    truncated = False
    for cell in cells:
        found, used, trunc = search.run_cell(cell, cap)
        merged |= found
        nodes += used
        if trunc:
            truncated = True
            break
    return merged, nodes, truncated


def _walk_route(g: Graph, node_budget: int, threads: int) -> set[tuple[int, ...]]:
    cells = _search_cells(g)
    chunks = [cells[i::threads] for i in range(max(1, threads))]
    chunks = [c for c in chunks if c]
    outputs = []
    if threads <= 1 or len(chunks) <= 1:
        outputs = [_walk_cells_worker((g.vertex_count, g.edges, chunk, node_budget)) for chunk in chunks]
    else:
        payloads = [(g.vertex_count, g.edges, chunk, node_budget) for chunk in chunks]
        with ProcessPoolExecutor(max_workers=len(chunks)) as pool:
            outputs = list(pool.map(_walk_cells_worker, payloads))
    merged: set = set()
    total = 0
    for found, nodes, truncated in outputs:
        if truncated:
            raise BudgetExceeded(f"walk search budget of {node_budget} exhausted")
        merged |= found
        total += nodes
    if total > node_budget:
        raise BudgetExceeded(f"walk search budget of {node_budget} exhausted")
    # every enumerated walk must verify as a strong trace
    for form in merged:
        verdict = stability(validate_double_trace(g, list(form)))
        if not verdict.strong:
            raise InternalInconsistency("walk enumeration emitted a non-strong trace")
    return merged


def _embedding_route(g: Graph, node_budget: int) -> set[tuple[int, ...]]:
    """Independent oracle: enumerate one-face embeddings directly.

    Signatures are normalized to +1 on a fixed spanning tree (vertex
    switches reach that form without changing any facial walk), so only
    cotree sign patterns and all rotation systems are scanned.
    """
    tree = next(spanning_trees(g))
    cotree = sorted(tree.cotree_edge_ids)
    candidates = []
    for v in range(g.vertex_count):
        incident = [eid for eid, _ in g.incident(v)]
        first, rest = incident[0], incident[1:]
        candidates.append([(first,) + p for p in itertools.permutations(rest)])
    out: set[tuple[int, ...]] = set()
    examined = 0
    for rotation in itertools.product(*candidates):
        for signs in itertools.product((1, -1), repeat=len(cotree)):
            examined += 1
            if examined > node_budget:
                raise BudgetExceeded(f"embedding enumeration budget of {node_budget} exhausted")
            signature = [1] * g.edge_count
            for eid, s in zip(cotree, signs):
                signature[eid] = s
            emb = Embedding(g, rotation, tuple(signature))
            walk = single_face_walk(emb)
            if walk is not None:
                out.add(canonical_cyclic(walk.vertices))
    return out


@dataclass(frozen=True)
class EnumerationResult:
    """Strong-trace count under one equivalence convention."""

    convention: str
    count: int
    parallel: int
    antiparallel: int
    mixed: int
    representatives: tuple[tuple[int, ...], ...] | None

    def to_json_dict(self, labels: Sequence[str]) -> dict:
        data = {
            "convention": self.convention,
            "count": self.count,
            "classes": {
                "parallel": self.parallel,
                "antiparallel": self.antiparallel,
                "mixed": self.mixed,
            },
        }
        if self.representatives is not None:
            data["representatives"] = [
                [labels[v] for v in rep] for rep in self.representatives
            ]
        return data


CONVENTIONS = (
    "rotation",
    "rotation-reversal",
    "rotation-automorphism",
    "rotation-reversal-automorphism",
)


def _canon_rotation_only(seq: tuple[int, ...]) -> tuple[int, ...]:
    best = None
    for k in range(len(seq)):
        rotated = seq[k:] + seq[:k]
        if best is None or rotated < best:
            best = rotated
    return best if best is not None else ()


def enumeration_summary(
    g: Graph,
    node_budget: int = DEFAULT_NODE_BUDGET,
    threads: int = 1,
    with_representatives: bool = True,
) -> dict[str, EnumerationResult]:
    """Counts of strong traces under every supported convention.

    The walk backtracking and the one-face embedding enumeration must agree
    on the underlying canonical set before any quotient is taken.
    """
    walk_set = _walk_route(g, node_budget, threads)
    embedding_set = _embedding_route(g, node_budget)
    if walk_set != embedding_set:
        raise InternalInconsistency(
            "walk enumeration and embedding enumeration disagree: "
            f"{len(walk_set)} vs {len(embedding_set)} classes"
        )
    base = sorted(walk_set)

    rotation_forms = sorted(
        {
            form
            for w in base
            for form in (
                _canon_rotation_only(w),
                _canon_rotation_only(tuple(reversed(w))),
            )
        }
    )
    autos = graph_automorphisms(g)

    def orbit_min(seq: tuple[int, ...], canon) -> tuple[int, ...]:
        return min(canon(tuple(sigma[v] for v in seq)) for sigma in autos)

    rotrev_auto = sorted({orbit_min(w, canonical_cyclic) for w in base})
    rot_auto = sorted({orbit_min(w, _canon_rotation_only) for w in rotation_forms})

    def build(name: str, reps: list[tuple[int, ...]]) -> EnumerationResult:
        parallel = antiparallel = mixed = 0
        for rep in reps:
            report = classify_edges(validate_double_trace(g, list(rep)))
            if report.parallel_trace:
                parallel += 1
            elif report.antiparallel_trace:
                antiparallel += 1
            else:
                mixed += 1
        return EnumerationResult(
            convention=name,
            count=len(reps),
            parallel=parallel,
            antiparallel=antiparallel,
            mixed=mixed,
            representatives=tuple(reps) if with_representatives else None,
        )

    return {
        "rotation": build("rotation", rotation_forms),
        "rotation-reversal": build("rotation-reversal", base),
        "rotation-automorphism": build("rotation-automorphism", rot_auto),
        "rotation-reversal-automorphism": build(
            "rotation-reversal-automorphism", rotrev_auto
        ),
    }


def enumerate_strong_traces(
    g: Graph,
    convention: str = "rotation-reversal",
    node_budget: int = DEFAULT_NODE_BUDGET,
    threads: int = 1,
    with_representatives: bool = True,
) -> EnumerationResult:
    """Enumerate the strong traces of ``g`` under one equivalence convention."""
    if convention not in CONVENTIONS:
        raise ValueError(f"unknown convention {convention!r}; choose one of {CONVENTIONS}")
    summary = enumeration_summary(
        g, node_budget=node_budget, threads=threads, with_representatives=with_representatives
    )
    return summary[convention]

"""Combinatorial embeddings: rotation systems with edge signatures.

An embedding assigns every vertex a cyclic order of its incident edges and
every edge a sign.  Facial walks are traced by the local rule: after
arriving at ``v`` along ``e`` with accumulated sign ``s`` (the running
product of traversed edge signs), the walk leaves through the rotation
predecessor of ``e`` when ``s`` is positive and through the successor when
``s`` is negative.

Tracing is bookkept on the state space of (directed edge, accumulated sign)
pairs, ``4|E|`` states in total.  The step rule is a bijection there, so the
states split into disjoint orbits.  Orbits come in mirror pairs - the
structural reversal maps the state "traversed u->v, sign s" to "traversed
v->u, sign -s*sign(uv)" - and each face of the embedding is one such pair.
Keeping one orbit per pair therefore yields every facial walk exactly once
and covers every edge exactly twice.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import (
    IncoherentCorners,
    InternalInconsistency,
    NotDoubleCover,
    UnknownEdge,
    UnknownVertex,
)
from .graph import Graph, Step, resolve_closed_walk


def cycle_decomposition(nodes: Sequence[int], links: Sequence[tuple[int, int]]) -> list[list[int]]:
    """Decompose a 2-regular multigraph (loops and parallel links allowed)
    into its cycles, each a list of node ids.

    Every node must meet exactly two link endpoints, a loop counting twice.
    Cycles start at their smallest node and run toward its smaller neighbor;
    the list is sorted by starting node.
    """
    incidence: dict[int, list[tuple[int, int]]] = {node: [] for node in nodes}
    for lid, (a, b) in enumerate(links):
        if a == b:
            incidence[a].append((lid, a))
            incidence[a].append((lid, a))
        else:
            incidence[a].append((lid, b))
            incidence[b].append((lid, a))
    for node, slots in incidence.items():
        if len(slots) != 2:
            raise ValueError(f"node {node} has {len(slots)} link endpoints, expected 2")

    used = [False] * len(links)
    cycles: list[list[int]] = []
    for start in sorted(nodes):
        candidates = [slot for slot in incidence[start] if not used[slot[0]]]
        if not candidates:
            continue
        # walk toward the smaller neighbor first for determinism
        lid, nxt = min(candidates, key=lambda slot: (slot[1], slot[0]))
        cycle = [start]
        used[lid] = True
        cur = nxt
        while cur != start:
            cycle.append(cur)
            lid, nxt = next(slot for slot in incidence[cur] if not used[slot[0]])
            used[lid] = True
            cur = nxt
        cycles.append(cycle)
    return cycles


@dataclass(frozen=True)
class FacialWalk:
    """A closed facial walk as a cyclic sequence of edge traversals."""

    steps: tuple[Step, ...]

    def __len__(self) -> int:
        return len(self.steps)

    @property
    def vertices(self) -> tuple[int, ...]:
        return tuple(step.tail for step in self.steps)

    @property
    def step_directions(self) -> tuple[bool, ...]:
        """Per step, whether the edge is traversed from its smaller endpoint."""
        return tuple(step.tail < step.head for step in self.steps)

    def reversed(self) -> "FacialWalk":
        return FacialWalk(tuple(Step(h, e, t) for (t, e, h) in reversed(self.steps)))

    def canonical(self) -> tuple[Step, ...]:
        """Lexicographic minimum over all rotations of the walk and of its
        reversal; the identity used for walk equality."""
        best = None
        for seq in (self.steps, self.reversed().steps):
            for k in range(len(seq)):
                rotated = seq[k:] + seq[:k]
                if best is None or rotated < best:
                    best = rotated
        return best if best is not None else ()


@dataclass(frozen=True)
class SurfaceDescriptor:
    """The closed surface determined by an embedding."""

    orientable: bool
    genus: int
    face_count: int

    def to_json_dict(self) -> dict:
        return {
            "orientable": self.orientable,
            "genus": self.genus,
            "face_count": self.face_count,
        }


@dataclass(frozen=True)
class Embedding:
    """Rotation system plus edge signature over a fixed graph.

    ``rotation[v]`` lists the incident edge ids of ``v`` in cyclic order,
    recorded linearly starting from the smallest id; ``signature[e]`` is
    +1 or -1.
    """

    graph: Graph
    rotation: tuple[tuple[int, ...], ...]
    signature: tuple[int, ...]

    def __post_init__(self):
        g = self.graph
        if len(self.rotation) != g.vertex_count:
            raise UnknownVertex("rotation must cover every vertex")
        normalized = []
        for v, order in enumerate(self.rotation):
            expected = sorted(eid for eid, _ in g.incident(v))
            if sorted(order) != expected:
                raise UnknownEdge(f"rotation at vertex {v} is not a permutation of its edges")
            k = order.index(min(order))
            normalized.append(tuple(order[k:] + order[:k]))
        object.__setattr__(self, "rotation", tuple(normalized))
        if len(self.signature) != g.edge_count or any(s not in (-1, 1) for s in self.signature):
            raise UnknownEdge("signature must assign +1 or -1 to every edge")
        nxt: list[dict[int, int]] = []
        prv: list[dict[int, int]] = []
        for order in self.rotation:
            d = len(order)
            nxt.append({order[i]: order[(i + 1) % d] for i in range(d)})
            prv.append({order[i]: order[(i - 1) % d] for i in range(d)})
        object.__setattr__(self, "_next", nxt)
        object.__setattr__(self, "_prev", prv)

    def rotation_next(self, v: int, e: int) -> int:
        return self._next[v][e]

    def rotation_prev(self, v: int, e: int) -> int:
        return self._prev[v][e]

    def to_json_dict(self) -> dict:
        return {
            "rotation": {str(v): list(order) for v, order in enumerate(self.rotation)},
            "signature": {str(e): s for e, s in enumerate(self.signature)},
        }


def embedding_from_json(g: Graph, data: dict) -> Embedding:
    rotation = tuple(
        tuple(data["rotation"][str(v)]) for v in range(g.vertex_count)
    )
    signature = tuple(int(data["signature"][str(e)]) for e in range(g.edge_count))
    return Embedding(g, rotation, signature)


# --- facial-walk tracing -----------------------------------------------------

# State encoding: sid = (edge << 2) | (head_slot << 1) | sign_bit, where
# head_slot picks which endpoint was arrived at and sign_bit 0 means +1.


def _state_orbits(emb: Embedding) -> tuple[list[list[int]], list[int]]:
    """All orbits of the tracing rule, plus the orbit id of every state."""
    g = emb.graph
    m = g.edge_count
    edges = g.edges
    sig = emb.signature

    def advance(sid: int) -> int:
        e = sid >> 2
        hd = (sid >> 1) & 1
        sg = sid & 1
        v = edges[e][hd]
        f = emb.rotation_prev(v, e) if sg == 0 else emb.rotation_next(v, e)
        fu, fv = edges[f]
        nhd = 1 if fu == v else 0
        nsg = sg ^ (1 if sig[f] == -1 else 0)
        return (f << 2) | (nhd << 1) | nsg

    orbit_of = [-1] * (4 * m)
    orbits: list[list[int]] = []
    for start in range(4 * m):
        if orbit_of[start] != -1:
            continue
        oid = len(orbits)
        orbit = []
        sid = start
        while orbit_of[sid] == -1:
            orbit_of[sid] = oid
            orbit.append(sid)
            sid = advance(sid)
        if sid != start:
            raise InternalInconsistency("facial tracing revisited a foreign state")
        orbits.append(orbit)
    return orbits, orbit_of


def _mirror_state(emb: Embedding, sid: int) -> int:
    e = sid >> 2
    hd = (sid >> 1) & 1
    sg = sid & 1
    nsg = sg if emb.signature[e] == -1 else sg ^ 1
    return (e << 2) | ((1 - hd) << 1) | nsg


def trace_faces(emb: Embedding) -> list[FacialWalk]:
    """The complete set of facial walks, each reported once.

    Orbits of the tracing rule are paired by structural reversal; one walk
    is kept per pair.  Across the result every edge id appears exactly
    twice.
    """
    g = emb.graph
    orbits, orbit_of = _state_orbits(emb)
    kept: list[list[int]] = []
    for oid, orbit in enumerate(orbits):
        partner = orbit_of[_mirror_state(emb, orbit[0])]
        if partner == oid:
            raise InternalInconsistency("a facial orbit paired with itself")
        if len(orbits[partner]) != len(orbit):
            raise InternalInconsistency("mirror orbits of different lengths")
        if oid < partner:
            kept.append(orbit)

    walks = []
    edge_uses = [0] * g.edge_count
    for orbit in kept:
        steps = []
        for sid in orbit:
            e = sid >> 2
            hd = (sid >> 1) & 1
            head = g.edges[e][hd]
            steps.append(Step(g.other_end(e, head), e, head))
            edge_uses[e] += 1
        walks.append(FacialWalk(tuple(steps)))
    if any(c != 2 for c in edge_uses):
        raise InternalInconsistency("facial walks do not double-cover the edges")
    walks.sort(key=lambda w: w.canonical())
    return walks


def face_count(emb: Embedding) -> int:
    orbits, _ = _state_orbits(emb)
    if len(orbits) % 2 != 0:
        raise InternalInconsistency("odd number of facial orbits")
    return len(orbits) // 2


def single_face_walk(emb: Embedding) -> FacialWalk | None:
    """The unique facial walk when the embedding has exactly one face,
    otherwise None.

    The orbit of any state has length 2|E| exactly when there is a single
    face: the mirror orbit then accounts for the remaining states.
    """
    g = emb.graph
    m = g.edge_count
    target = 2 * m
    edges = g.edges
    sig = emb.signature
    steps: list[Step] = []
    seen = set()
    sid = 0
    for _ in range(target):
        if sid in seen:
            return None  # orbit shorter than 2|E|
        seen.add(sid)
        e = sid >> 2
        hd = (sid >> 1) & 1
        sg = sid & 1
        v = edges[e][hd]
        steps.append(Step(g.other_end(e, v), e, v))
        f = emb.rotation_prev(v, e) if sg == 0 else emb.rotation_next(v, e)
        fu, fv = edges[f]
        nhd = 1 if fu == v else 0
        nsg = sg ^ (1 if sig[f] == -1 else 0)
        sid = (f << 2) | (nhd << 1) | nsg
    if sid != 0:
        return None
    if _mirror_state(emb, 0) in seen:
        raise InternalInconsistency("a facial orbit paired with itself")
    return FacialWalk(tuple(steps))


def is_orientable(emb: Embedding) -> bool:
    """Decide orientability by spreading a vertex potential over a spanning
    tree and checking that every cotree edge closes an even-sign cycle."""
    g = emb.graph
    pot = [0] * g.vertex_count
    pot[0] = 1
    stack = [0]
    tree_edges = set()
    while stack:
        v = stack.pop()
        for eid, w in g.incident(v):
            if pot[w] == 0:
                pot[w] = pot[v] * emb.signature[eid]
                tree_edges.add(eid)
                stack.append(w)
    for eid, (u, v) in enumerate(g.edges):
        if eid in tree_edges:
            continue
        if pot[u] * pot[v] * emb.signature[eid] != 1:
            return False
    return True


def surface_of(emb: Embedding) -> SurfaceDescriptor:
    """Orientability, genus and face count; the Euler relation must hold."""
    g = emb.graph
    faces = face_count(emb)
    chi = g.vertex_count - g.edge_count + faces
    orientable = is_orientable(emb)
    if orientable:
        if (2 - chi) % 2 != 0 or chi > 2:
            raise InternalInconsistency(f"orientable embedding with Euler characteristic {chi}")
        genus = (2 - chi) // 2
    else:
        genus = 2 - chi
        if genus < 1:
            raise InternalInconsistency(f"nonorientable embedding with Euler characteristic {chi}")
    return SurfaceDescriptor(orientable, genus, faces)


# --- local moves -------------------------------------------------------------


def flip_signature(emb: Embedding, e: int) -> Embedding:
    """Negate the signature of edge ``e``; everything else is unchanged."""
    if not (0 <= e < emb.graph.edge_count):
        raise UnknownEdge(f"edge id {e} outside 0..{emb.graph.edge_count - 1}")
    signature = list(emb.signature)
    signature[e] = -signature[e]
    return Embedding(emb.graph, emb.rotation, tuple(signature))


def vertex_switch(emb: Embedding, v: int) -> Embedding:
    """Invert the local rotation at ``v`` and negate the signs of its edges.

    The result is equivalent to the input: it has the same facial walks.
    """
    if not (0 <= v < emb.graph.vertex_count):
        raise UnknownVertex(f"vertex id {v} outside 0..{emb.graph.vertex_count - 1}")
    rotation = list(emb.rotation)
    rotation[v] = tuple(reversed(rotation[v]))
    signature = list(emb.signature)
    for eid, _ in emb.graph.incident(v):
        signature[eid] = -signature[eid]
    return Embedding(emb.graph, tuple(rotation), tuple(signature))


# --- reconstruction from walks ----------------------------------------------


def _solve_gf2(rows: list[tuple[int, int]]) -> int | None:
    """Solve a linear system over GF(2).

    Rows are (bitmask, rhs) pairs.  Returns one solution as a bitmask with
    free variables set to 0, or None when inconsistent.
    """
    pivots: dict[int, tuple[int, int]] = {}
    for mask, rhs in rows:
        while mask:
            bit = mask & -mask
            if bit in pivots:
                pm, pr = pivots[bit]
                mask ^= pm
                rhs ^= pr
            else:
                pivots[bit] = (mask, rhs)
                break
        else:
            if rhs:
                return None
    solution = 0
    for bit in sorted(pivots, reverse=True):
        mask, rhs = pivots[bit]
        value = rhs ^ ((solution & (mask ^ bit)).bit_count() & 1)
        if value:
            solution |= bit
    return solution


def embedding_from_walks(g: Graph, walks: Sequence[Sequence[int]]) -> Embedding:
    """Reconstruct an embedding whose facial walks are the given closed walks.

    Every edge must be traversed exactly twice across the collection, and the
    consecutive-edge pairs at each vertex must chain into a single cyclic
    order (otherwise the gluing has a pinch point and no surface exists).
    The rotation is read off those corner cycles; the signature is the
    solution of a parity system that makes the tracing rule reproduce each
    walk and keep distinct walks on distinct orbits.
    """
    if not walks:
        raise NotDoubleCover("no walks given")
    step_lists = [resolve_closed_walk(g, seq) for seq in walks]

    counts = [0] * g.edge_count
    for steps in step_lists:
        for st in steps:
            counts[st.edge] += 1
    bad = [e for e, c in enumerate(counts) if c != 2]
    if bad:
        raise NotDoubleCover(f"edges covered != 2 times: {sorted(bad)}")

    corners: list[list[tuple[int, int]]] = [[] for _ in range(g.vertex_count)]
    for steps in step_lists:
        ell = len(steps)
        for i, st in enumerate(steps):
            out_edge = steps[(i + 1) % ell].edge
            corners[st.head].append((st.edge, out_edge))

    rotation: list[tuple[int, ...]] = []
    for v in range(g.vertex_count):
        nodes = [eid for eid, _ in g.incident(v)]
        try:
            cycles = cycle_decomposition(nodes, corners[v])
        except ValueError as exc:
            raise IncoherentCorners(str(exc), vertex=v) from exc
        if len(cycles) != 1:
            raise IncoherentCorners(
                f"corner pairs at vertex {g.labels[v]!r} split into {len(cycles)} cycles",
                vertex=v,
            )
        rotation.append(tuple(cycles[0]))

    # Parity system: variable x_e is the sign bit of edge e, variable b_j the
    # initial sign bit of walk j.  The accumulated sign after step t of walk j
    # is b_j xor prefix_j(t) where the prefix xors the x bits of steps 0..t.
    m = g.edge_count
    nxt = []
    prv = []
    for order in rotation:
        d = len(order)
        nxt.append({order[i]: order[(i + 1) % d] for i in range(d)})
        prv.append({order[i]: order[(i - 1) % d] for i in range(d)})

    rows: list[tuple[int, int]] = []
    prefix_masks: list[list[int]] = []
    for j, steps in enumerate(step_lists):
        bvar = 1 << (m + j)
        ell = len(steps)
        prefixes = []
        acc = 0
        for st in steps:
            acc ^= 1 << st.edge
            prefixes.append(acc)
        prefix_masks.append(prefixes)
        # the accumulated sign returns to its initial value after a full lap
        rows.append((prefixes[-1], 0))
        for t, st in enumerate(steps):
            v = st.head
            out_edge = steps[(t + 1) % ell].edge
            succ = nxt[v][st.edge]
            pred = prv[v][st.edge]
            if succ == pred:
                continue  # degree <= 2: either sign follows the walk
            if out_edge == pred:
                alpha = 0
            elif out_edge == succ:
                alpha = 1
            else:
                raise InternalInconsistency("corner not adjacent in its own rotation")
            rows.append((prefixes[t] ^ bvar, alpha))
        # the orbit must not close before the full lap: at any later reuse of
        # the initial directed edge the accumulated sign has to differ
        d0 = (steps[0].tail, steps[0].head)
        for t in range(1, ell):
            if (steps[t].tail, steps[t].head) == d0:
                # the shared x bit of the repeated edge cancels, leaving the
                # prefix up to the step before the reuse
                rows.append((prefixes[t - 1], 1))

    # distinct walks sharing a directed edge must ride orbits of opposite sign
    seen_directed: dict[tuple[int, int], tuple[int, int]] = {}
    for j, steps in enumerate(step_lists):
        for t, st in enumerate(steps):
            key = (st.tail, st.head)
            if key in seen_directed:
                j2, t2 = seen_directed[key]
                if j2 != j:
                    mask = (1 << (m + j)) ^ (1 << (m + j2))
                    mask ^= prefix_masks[j][t - 1] if t >= 1 else 0
                    mask ^= prefix_masks[j2][t2 - 1] if t2 >= 1 else 0
                    rows.append((mask, 1))
            else:
                seen_directed[key] = (j, t)

    solution = _solve_gf2(rows)
    if solution is None:
        raise InternalInconsistency("signature system for a coherent walk collection is infeasible")
    signature = tuple(-1 if (solution >> e) & 1 else 1 for e in range(m))
    emb = Embedding(g, tuple(rotation), signature)

    produced = sorted(w.canonical() for w in trace_faces(emb))
    wanted = sorted(FacialWalk(tuple(steps)).canonical() for steps in step_lists)
    if produced != wanted:
        raise InternalInconsistency("reconstructed embedding does not trace the given walks")
    return emb

"""Combinatorial simple 3-polytopes stored as rotation systems on faces.

A polytope with ``m`` faces is given by, for every face ``i``, the cyclic
sequence of faces adjacent to it.  All cycles are kept in one global
orientation: whenever ``j, k`` are consecutive in the cycle of ``i`` the
triple ``(i, j, k)`` is a vertex, and then ``k, i`` are consecutive around
``j`` and ``i, j`` around ``k``.  Faces are numbered from 0 internally and
rendered from 1 in human-readable reports.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass
from typing import Dict, Iterable, List, Sequence, Tuple

from .errors import (
    Asymmetric,
    DegenerateResult,
    InvalidInput,
    MultiEdge,
    NonCubic,
    NonSpherical,
    ValidationError,
)


def popcount(x: int) -> int:
    return bin(x).count("1")


def bits(mask: int) -> List[int]:
    """Indices of the set bits of ``mask`` in increasing order."""
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


def mask_of(indices: Iterable[int]) -> int:
    m = 0
    for i in indices:
        m |= 1 << i
    return m


class SimplePolytope:
    """Validated, immutable simple 3-polytope (see module docstring)."""

    __slots__ = ("m", "face_cycles", "nbr", "edges", "vertices", "_succ",
                 "_vertex_masks", "_code")

    def __init__(self, cycles: Sequence[Sequence[int]]):
        # expects oriented, validated cycles; use from_face_cycles otherwise
        self.m = len(cycles)
        self.face_cycles: Tuple[Tuple[int, ...], ...] = tuple(tuple(c) for c in cycles)
        self.nbr: Tuple[int, ...] = tuple(mask_of(c) for c in self.face_cycles)
        succ = []
        for c in self.face_cycles:
            n = len(c)
            succ.append({c[t]: c[(t + 1) % n] for t in range(n)})
        self._succ = succ
        edges = set()
        verts = set()
        for i, c in enumerate(self.face_cycles):
            for t, j in enumerate(c):
                if i < j:
                    edges.add((i, j))
                k = c[(t + 1) % len(c)]
                verts.add(tuple(sorted((i, j, k))))
        self.edges: Tuple[Tuple[int, int], ...] = tuple(sorted(edges))
        self.vertices: Tuple[Tuple[int, int, int], ...] = tuple(sorted(verts))
        self._vertex_masks = frozenset(mask_of(v) for v in self.vertices)
        self._code = None

    # -- basic queries -------------------------------------------------

    def __repr__(self) -> str:
        return f"SimplePolytope(m={self.m}, f={f_vector(self)})"

    def __eq__(self, other) -> bool:
        return isinstance(other, SimplePolytope) and self.face_cycles == other.face_cycles

    def __hash__(self) -> int:
        return hash(self.face_cycles)

    def face_size(self, i: int) -> int:
        return len(self.face_cycles[i])

    @property
    def face_sizes(self) -> Tuple[int, ...]:
        return tuple(len(c) for c in self.face_cycles)

    def adjacent(self, i: int, j: int) -> bool:
        return bool(self.nbr[i] >> j & 1)

    def next_around(self, i: int, j: int) -> int:
        """Neighbour of face ``i`` following ``j`` in the oriented cycle."""
        return self._succ[i][j]

    def prev_around(self, i: int, j: int) -> int:
        # successor of i around j is the predecessor of j around i, up to the
        # vertex rule: (x, j) consecutive in i  <=>  (i, x) consecutive in j
        return self._succ[j][i]

    def is_vertex_mask(self, mask: int) -> bool:
        return mask in self._vertex_masks

    def p_vector(self) -> Dict[int, int]:
        out: Dict[int, int] = {}
        for c in self.face_cycles:
            out[len(c)] = out.get(len(c), 0) + 1
        return dict(sorted(out.items()))

    @property
    def quadrangles(self) -> List[int]:
        return [i for i, c in enumerate(self.face_cycles) if len(c) == 4]

    @property
    def quad_mask(self) -> int:
        return mask_of(self.quadrangles)

    @property
    def full_mask(self) -> int:
        return (1 << self.m) - 1

    def mirror(self) -> "SimplePolytope":
        return SimplePolytope([tuple(reversed(c)) for c in self.face_cycles])

    def relabel(self, perm: Sequence[int]) -> "SimplePolytope":
        """Face ``i`` becomes face ``perm[i]``."""
        cycles: List[Tuple[int, ...]] = [()] * self.m
        for i, c in enumerate(self.face_cycles):
            cycles[perm[i]] = tuple(perm[j] for j in c)
        return SimplePolytope(cycles)

    # -- serialisation -------------------------------------------------

    def to_dict(self) -> dict:
        return {"m": self.m, "faces": [list(c) for c in self.face_cycles]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @property
    def code(self) -> bytes:
        if self._code is None:
            self._code = canonical_code(self)
        return self._code


# ---------------------------------------------------------------------------
# construction and validation


def from_face_cycles(cycles: Sequence[Sequence[int]]) -> SimplePolytope:
    """Validate a rotation system on faces and return a SimplePolytope.

    Cycles may be given with mixed orientations; they are re-oriented to a
    single global orientation (that of face 0) when this is possible.
    """
    try:
        raw = [[int(x) for x in c] for c in cycles]
    except (TypeError, ValueError) as exc:
        raise InvalidInput(f"face cycles must be integer sequences: {exc}") from None
    m = len(raw)
    if m < 4:
        raise NonSpherical(f"a 3-polytope needs at least 4 faces, got {m}")
    for i, c in enumerate(raw):
        if len(c) < 3:
            raise NonCubic(f"face {i} has only {len(c)} neighbours")
        for j in c:
            if not 0 <= j < m:
                raise InvalidInput(f"face {i} lists out-of-range index {j}")
            if j == i:
                raise InvalidInput(f"face {i} lists itself as a neighbour")
        if len(set(c)) != len(c):
            raise MultiEdge(f"face {i} lists a neighbour twice")
    nbrsets = [set(c) for c in raw]
    for i, c in enumerate(raw):
        for j in c:
            if i not in nbrsets[j]:
                raise Asymmetric(f"face {i} lists {j} but not conversely")

    # connectivity of the face adjacency graph
    seen = {0}
    queue = deque([0])
    while queue:
        i = queue.popleft()
        for j in raw[i]:
            if j not in seen:
                seen.add(j)
                queue.append(j)
    if len(seen) != m:
        raise NonSpherical("face adjacency graph is disconnected")

    oriented = _orient(raw)
    pol = SimplePolytope(oriented)
    f0, f1, f2 = f_vector(pol)
    for i, c in enumerate(oriented):
        n = len(c)
        for t in range(n):
            j, k = c[t], c[(t + 1) % n]
            if not (pol.adjacent(j, k) and pol.next_around(j, k) == i
                    and pol.next_around(k, i) == j):
                raise NonCubic(f"faces {i}, {j}, {k} do not meet in a vertex consistently")
    if 2 * f1 != sum(len(c) for c in oriented) or 3 * f0 != 2 * f1:
        raise NonCubic("vertex/edge counts are not those of a cubic graph")
    if f0 - f1 + f2 != 2:
        raise NonSpherical(f"Euler characteristic {f0 - f1 + f2} != 2")
    return pol


def _orient(raw: List[List[int]]) -> List[Tuple[int, ...]]:
    m = len(raw)
    pos = [{j: t for t, j in enumerate(c)} for c in raw]
    sign = [0] * m
    sign[0] = 1
    queue = deque([0])

    def oriented(i):
        return raw[i] if sign[i] > 0 else raw[i][::-1]

    while queue:
        i = queue.popleft()
        c = oriented(i)
        n = len(c)
        for t in range(n):
            j, k = c[t], c[(t + 1) % n]
            # around j the pair (k, i) must be consecutive
            cj = raw[j]
            if k not in pos[j]:
                raise NonCubic(f"faces {i}, {j}, {k}: {k} is not adjacent to {j}")
            pk, pi = pos[j][k], pos[j][i]
            nj = len(cj)
            if (pk + 1) % nj == pi:
                want = 1
            elif (pi + 1) % nj == pk:
                want = -1
            else:
                raise NonCubic(f"faces {j}: neighbours {k} and {i} are not consecutive")
            if sign[j] == 0:
                sign[j] = want
                queue.append(j)
            elif sign[j] != want:
                raise NonCubic("rotation system is not orientable")
    return [tuple(oriented(i)) for i in range(m)]


def f_vector(P: SimplePolytope) -> Tuple[int, int, int]:
    """(vertices, edges, faces)."""
    return (len(P.vertices), len(P.edges), P.m)


def h_vector(P: SimplePolytope) -> Tuple[int, int, int, int]:
    # for a simple 3-polytope h = (1, m-3, m-3, 1)
    f0, f1, f2 = f_vector(P)
    # (t-1)^3 + f2 (t-1)^2 + f1 (t-1) + f0, coefficients from t^0 upward
    coeffs = [-1 + f2 - f1 + f0, 3 - 2 * f2 + f1, -3 + f2, 1]
    return tuple(coeffs)


def n2_pairs(P: SimplePolytope) -> List[int]:
    """Masks {i, j} of pairs of disjoint faces, sorted."""
    out = []
    for i in range(P.m):
        for j in range(i + 1, P.m):
            if not P.adjacent(i, j):
                out.append((1 << i) | (1 << j))
    return sorted(out)


def from_json(text_or_obj) -> SimplePolytope:
    obj = json.loads(text_or_obj) if isinstance(text_or_obj, str) else text_or_obj
    try:
        faces = obj["faces"]
    except (KeyError, TypeError):
        raise InvalidInput("polytope JSON needs a 'faces' list") from None
    if "m" in obj and obj["m"] != len(faces):
        raise InvalidInput(f"'m' is {obj['m']} but {len(faces)} faces are listed")
    return from_face_cycles(faces)


# ---------------------------------------------------------------------------
# canonical form


def canonical_code(P: SimplePolytope) -> bytes:
    """Canonical byte string identifying P up to relabelling and reflection.

    Every directed adjacency ``i -> j`` together with an orientation seeds a
    breadth-first relabelling; the code is the lexicographically smallest
    serialisation.  Seeds are restricted to an isomorphism-invariant class
    (lexicographically smallest pair of face sizes), which keeps the result
    canonical while skipping most of the work.
    """
    m = P.m
    if m > 255:
        raise ValidationError("canonical codes support at most 255 faces")
    sizes = P.face_sizes
    best_pair = min((sizes[i], sizes[j]) for i in range(m) for j in P.face_cycles[i])
    forward = P.face_cycles
    backward = tuple(tuple(reversed(c)) for c in forward)
    pos_f = [{j: t for t, j in enumerate(c)} for c in forward]
    pos_b = [{j: t for t, j in enumerate(c)} for c in backward]
    best = None
    for cycles, pos in ((forward, pos_f), (backward, pos_b)):
        for i in range(m):
            if sizes[i] != best_pair[0]:
                continue
            for j in cycles[i]:
                if sizes[j] != best_pair[1]:
                    continue
                code = _bfs_code(cycles, pos, i, j, m, best)
                if code is not None and (best is None or code < best):
                    best = code
    return bytes([m]) + bytes(best)


def _bfs_code(cycles, pos, start, first, m, bound):
    label = [-1] * m
    label[start] = 0
    order = [start]
    ref = [0] * m
    ref[start] = first
    code = []
    head = 0
    nb = len(bound) if bound is not None else 0
    while head < len(order):
        f = order[head]
        head += 1
        c = cycles[f]
        n = len(c)
        s = pos[f][ref[f]]
        code.append(n)
        for t in range(n):
            g = c[(s + t) % n]
            if label[g] < 0:
                label[g] = len(order)
                order.append(g)
                ref[g] = f
            code.append(label[g])
        if bound is not None:
            # early exit once this prefix is already larger than the best
            k = len(code)
            pref = bound[:k] if k <= nb else bound
            if code[:len(pref)] > list(pref):
                return None
            if code[:len(pref)] < list(pref):
                bound = None
    return code


def is_isomorphic(P: SimplePolytope, Q: SimplePolytope) -> bool:
    return P.m == Q.m and P.code == Q.code


def code_hex(P: SimplePolytope) -> str:
    return P.code.hex()


# ---------------------------------------------------------------------------
# dual complex


@dataclass(frozen=True)
class DualComplex:
    """Simplicial 2-sphere dual to P: faces, adjacent pairs, vertex triples."""

    vertices: Tuple[int, ...]
    edges: Tuple[Tuple[int, int], ...]
    triangles: Tuple[Tuple[int, int, int], ...]

    def euler_characteristic(self) -> int:
        return len(self.vertices) - len(self.edges) + len(self.triangles)

    def is_2_sphere(self) -> bool:
        count: Dict[Tuple[int, int], int] = {}
        for a, b, c in self.triangles:
            for e in ((a, b), (a, c), (b, c)):
                count[e] = count.get(e, 0) + 1
        if set(count) != set(self.edges) or any(v != 2 for v in count.values()):
            return False
        for v in self.vertices:
            link_edges = [tuple(x for x in t if x != v) for t in self.triangles if v in t]
            if not link_edges or not _is_single_cycle(link_edges):
                return False
        return self.euler_characteristic() == 2


def _is_single_cycle(edges) -> bool:
    adj: Dict[int, List[int]] = {}
    for a, b in edges:
        adj.setdefault(a, []).append(b)
        adj.setdefault(b, []).append(a)
    if any(len(v) != 2 for v in adj.values()):
        return False
    start = next(iter(adj))
    seen = {start}
    stack = [start]
    while stack:
        x = stack.pop()
        for y in adj[x]:
            if y not in seen:
                seen.add(y)
                stack.append(y)
    return len(seen) == len(adj)


def dual_complex(P: SimplePolytope) -> DualComplex:
    return DualComplex(tuple(range(P.m)), P.edges, P.vertices)


# ---------------------------------------------------------------------------
# 4-valent graphs (graphs of ideal right-angled polytopes)


class QuadGraph:
    """Embedded 4-valent planar graph given by counter-clockwise rotations.

    ``rotation[v]`` lists the four neighbours of ``v``.  Faces are traced by
    the rule: after arriving at ``v`` from ``u`` leave towards the neighbour
    preceding ``u`` in the rotation at ``v``.
    """

    __slots__ = ("rotation", "faces")

    def __init__(self, rotation: Sequence[Sequence[int]]):
        rot = tuple(tuple(int(x) for x in r) for r in rotation)
        n = len(rot)
        for v, r in enumerate(rot):
            if len(r) != 4:
                raise NonCubic(f"vertex {v} has degree {len(r)}, expected 4")
            if len(set(r)) != 4 or v in r:
                raise MultiEdge(f"vertex {v} has a loop or repeated neighbour")
            for w in r:
                if not 0 <= w < n or v not in rot[w]:
                    raise Asymmetric(f"edge {v}-{w} is not listed at both ends")
        self.rotation = rot
        self.faces = self._trace_faces()
        v, e, f = n, 2 * n, len(self.faces)
        if v - e + f != 2:
            raise NonSpherical(f"4-valent graph has Euler characteristic {v - e + f}")

    def _trace_faces(self) -> Tuple[Tuple[int, ...], ...]:
        rot = self.rotation
        used = set()
        faces = []
        for u in range(len(rot)):
            for v in rot[u]:
                if (u, v) in used:
                    continue
                face = []
                a, b = u, v
                while (a, b) not in used:
                    used.add((a, b))
                    face.append(a)
                    r = rot[b]
                    c = r[(r.index(a) - 1) % 4]
                    a, b = b, c
                faces.append(tuple(face))
        return tuple(faces)

    @property
    def n_vertices(self) -> int:
        return len(self.rotation)

    def face_containing(self, u: int, v: int) -> List[int]:
        out = []
        for fi, f in enumerate(self.faces):
            n = len(f)
            for t in range(n):
                a, b = f[t], f[(t + 1) % n]
                if {a, b} == {u, v}:
                    out.append(fi)
                    break
        return out

    def __repr__(self) -> str:
        return f"QuadGraph(V={self.n_vertices}, F={len(self.faces)})"


def medial(P: SimplePolytope) -> QuadGraph:
    """Medial graph: one vertex per edge of P, joined when consecutive on a face."""
    index = {e: t for t, e in enumerate(P.edges)}

    def eid(a, b):
        return index[(a, b) if a < b else (b, a)]

    rotation = []
    for a, b in P.edges:
        c = P.next_around(a, b)
        d = P.prev_around(a, b)
        rotation.append((eid(a, d), eid(b, d), eid(b, c), eid(a, c)))
    return QuadGraph(rotation)


def antiprism_graph(k: int) -> QuadGraph:
    """Graph of the k-antiprism: two k-cycles joined by a zigzag band."""
    if k < 3:
        raise InvalidInput("antiprism needs k >= 3")
    rot = []
    for i in range(k):  # top vertices 0..k-1
        rot.append(((i + 1) % k, (i - 1) % k, k + (i - 1) % k, k + i))
    for i in range(k):  # bottom vertex k+i sits between top i and top i+1
        rot.append((k + (i - 1) % k, k + (i + 1) % k, (i + 1) % k, i))
    return QuadGraph(rot)


def cut_4_valent_vertices(G: QuadGraph) -> SimplePolytope:
    """Replace every vertex of G by a quadrangle.

    Faces of the result: the faces of G (each now twice as long, alternating
    old neighbours and new quadrangles) followed by one quadrangle per vertex.
    """
    nf = len(G.faces)
    nv = G.n_vertices
    dart_face: Dict[Tuple[int, int], int] = {}
    for fi, f in enumerate(G.faces):
        n = len(f)
        for t in range(n):
            dart_face[(f[t], f[(t + 1) % n])] = fi
    cycles: List[List[int]] = []
    for fi, f in enumerate(G.faces):
        n = len(f)
        cyc = []
        for t in range(n):
            a, b = f[t], f[(t + 1) % n]
            cyc.append(nf + a)
            cyc.append(dart_face[(b, a)])
        cycles.append(cyc)
    for v in range(nv):
        r = G.rotation[v]
        cycles.append([dart_face[(v, w)] for w in r])
    try:
        return from_face_cycles(cycles)
    except ValidationError as exc:
        raise DegenerateResult(f"vertex cut is not a simple polytope: {exc}") from None

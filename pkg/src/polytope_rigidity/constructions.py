"""Named polytopes, truncation moves, edge-twists and family enumerators."""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

from .errors import (
    BoundTooLarge,
    ConstraintViolated,
    InvalidInput,
    InvalidTarget,
    NotDisjoint,
    NotRestricted,
    NotSameFace,
    UnknownName,
    ValidationError,
)
from .polytope import (
    QuadGraph,
    SimplePolytope,
    antiprism_graph,
    cut_4_valent_vertices,
    from_face_cycles,
)

DEFAULT_ENUMERATION_BOUND = 12
DEFAULT_IDEAL_BOUND = 22


# ---------------------------------------------------------------------------
# catalog


def simplex() -> SimplePolytope:
    return from_face_cycles([[1, 2, 3], [0, 2, 3], [0, 1, 3], [0, 1, 2]])


def prism(k: int) -> SimplePolytope:
    """M_k x I: side faces 0..k-1, top k, bottom k+1."""
    if k < 3:
        raise UnknownName("prism needs k >= 3")
    top, bottom = k, k + 1
    cycles = [[(i - 1) % k, top, (i + 1) % k, bottom] for i in range(k)]
    cycles.append(list(range(k)))
    cycles.append(list(range(k - 1, -1, -1)))
    return from_face_cycles(cycles)


def cube() -> SimplePolytope:
    return prism(4)


def barrel(k: int) -> SimplePolytope:
    """Two k-gons joined by two rings of k pentagons."""
    if k < 3:
        raise UnknownName("barrel needs k >= 3")
    top, bottom = 2 * k, 2 * k + 1

    def up(i):
        return i % k

    def low(i):
        return k + i % k

    cycles = [None] * (2 * k + 2)
    for i in range(k):
        cycles[up(i)] = [top, up(i + 1), low(i + 1), low(i), up(i - 1)]
        cycles[low(i)] = [bottom, low(i - 1), up(i - 1), up(i), low(i + 1)]
    cycles[top] = [up(i) for i in range(k)]
    cycles[bottom] = [low(i) for i in range(k)]
    return from_face_cycles(cycles)


def ideal_antiprism(k: int) -> SimplePolytope:
    """Vertex-cut of the k-antiprism graph (ideal almost Pogorelov, m = 4k+2)."""
    return cut_4_valent_vertices(antiprism_graph(k))


def leapfrog(P: SimplePolytope) -> SimplePolytope:
    """Keep every face of P and add one hexagon per vertex of P."""
    m = P.m
    vindex = {v: m + t for t, v in enumerate(P.vertices)}

    def vid(a, b, c):
        return vindex[tuple(sorted((a, b, c)))]

    cycles: List[List[int]] = []
    for i, c in enumerate(P.face_cycles):
        n = len(c)
        cycles.append([vid(i, c[t], c[(t + 1) % n]) for t in range(n)])
    for a, b, c in P.vertices:
        cyc = []
        for x, y in ((a, b), (b, c), (c, a)):
            z = P.next_around(x, y)
            w = P.prev_around(x, y)
            third = ({a, b, c} - {x, y}).pop()
            other = w if z == third else z
            cyc.extend([x, vid(x, y, other)])
        cycles.append(cyc)
    return from_face_cycles(cycles)


def associahedron() -> SimplePolytope:
    """Cube with three pairwise disjoint, pairwise orthogonal edges cut."""
    P = cube()
    for edge in ((4, 0), (1, 2), (5, 3)):
        P = cut_edge(P, *edge)
    return P


def p8() -> SimplePolytope:
    """Cube with two disjoint orthogonal edges cut that share no face."""
    P = cube()
    for edge in ((4, 0), (1, 2)):
        P = cut_edge(P, *edge)
    return P


def fullerene_c60() -> SimplePolytope:
    return leapfrog(barrel(5))


def named(name: str) -> SimplePolytope:
    """Resolve a catalog name such as ``cube``, ``prism:6`` or ``as3``."""
    key = name.strip().lower()
    base, _, arg = key.partition(":")
    fixed: Dict[str, Callable[[], SimplePolytope]] = {
        "simplex": simplex,
        "cube": cube,
        "as3": associahedron,
        "pe3": lambda: ideal_antiprism(3),
        "p8": p8,
        "c60": fullerene_c60,
        "dodecahedron": lambda: barrel(5),
        "m3xi": lambda: prism(3),
        "m5xi": lambda: prism(5),
        "m6xi": lambda: prism(6),
    }
    param: Dict[str, Callable[[int], SimplePolytope]] = {
        "prism": prism,
        "barrel": barrel,
        "antiprism": ideal_antiprism,
    }
    if not arg and base in fixed:
        return fixed[base]()
    if base in param and arg:
        try:
            k = int(arg)
        except ValueError:
            raise UnknownName(f"bad parameter in {name!r}") from None
        if k < 3:
            raise UnknownName(f"{base} needs k >= 3")
        if k > 200:
            raise BoundTooLarge(f"{base}:{k} is too large")
        return param[base](k)
    raise UnknownName(f"unknown polytope name {name!r}")


CATALOG_NAMES = ("simplex", "cube", "prism:k", "barrel:k", "antiprism:k",
                 "as3", "pe3", "p8", "c60", "dodecahedron", "m3xi", "m5xi", "m6xi")


# ---------------------------------------------------------------------------
# truncation moves


@dataclass(frozen=True)
class CutSpec:
    """Either ``kind='edge'`` with ``target=(a, b)`` (the faces meeting along
    the edge) or ``kind='two_adjacent_edges'`` with ``target=(a, b, c)``: the
    edges of face ``a`` shared with its consecutive neighbours ``b`` and ``c``.
    ``kind='vertex'`` with ``target=(a, b, c)`` cuts off a vertex."""

    kind: str
    target: Tuple[int, ...]
    enforce_hexagon: bool = True


def _rebuild(P: SimplePolytope, edits: Dict[int, List[int]], new_face: List[int]) -> SimplePolytope:
    cycles = [list(c) for c in P.face_cycles]
    for i, c in edits.items():
        cycles[i] = c
    cycles.append(new_face)
    return from_face_cycles(cycles)


def _replace(cycle: Sequence[int], old: int, new: int) -> List[int]:
    return [new if x == old else x for x in cycle]


def _insert_between(cycle: Sequence[int], a: int, b: int, new: int) -> List[int]:
    # insert ``new`` between consecutive entries a -> b
    n = len(cycle)
    for t in range(n):
        if cycle[t] == a and cycle[(t + 1) % n] == b:
            return list(cycle[:t + 1]) + [new] + list(cycle[t + 1:])
    raise InvalidTarget(f"{a}, {b} are not consecutive")


def cut_edge(P: SimplePolytope, a: int, b: int) -> SimplePolytope:
    """Cut off the edge F_a ∩ F_b; the new quadrangle gets index m."""
    if not (0 <= a < P.m and 0 <= b < P.m) or not P.adjacent(a, b):
        raise InvalidTarget(f"faces {a} and {b} do not share an edge")
    F = P.m
    c = P.prev_around(a, b)   # (c, b) consecutive around a
    d = P.next_around(a, b)   # (b, d) consecutive around a
    edits = {
        a: _replace(P.face_cycles[a], b, F),
        b: _replace(P.face_cycles[b], a, F),
        c: _insert_between(P.face_cycles[c], b, a, F),
        d: _insert_between(P.face_cycles[d], a, b, F),
    }
    return _rebuild(P, edits, [a, c, b, d])


def cut_vertex(P: SimplePolytope, a: int, b: int, c: int) -> SimplePolytope:
    if not P.is_vertex_mask((1 << a) | (1 << b) | (1 << c)):
        raise InvalidTarget(f"faces {a}, {b}, {c} do not meet in a vertex")
    if P.next_around(a, b) != c:
        b, c = c, b
    F = P.m
    edits = {
        a: _insert_between(P.face_cycles[a], b, c, F),
        b: _insert_between(P.face_cycles[b], c, a, F),
        c: _insert_between(P.face_cycles[c], a, b, F),
    }
    return _rebuild(P, edits, [a, b, c])


def cut_two_edges(P: SimplePolytope, a: int, b: int, c: int,
                  enforce_hexagon: bool = True) -> SimplePolytope:
    """Cut off the two edges of face ``a`` shared with ``b`` and ``c``.

    ``b`` and ``c`` must be consecutive around ``a``.  With
    ``enforce_hexagon`` the host face must have at least six edges.
    """
    if not (P.adjacent(a, b) and P.adjacent(a, c)):
        raise InvalidTarget(f"faces {b}, {c} are not both adjacent to {a}")
    if P.next_around(a, b) != c:
        if P.next_around(a, c) == b:
            b, c = c, b
        else:
            raise InvalidTarget(f"faces {b}, {c} are not consecutive around {a}")
    n = P.face_size(a)
    if n < 4:
        raise InvalidTarget(f"face {a} is a triangle")
    if enforce_hexagon and n < 6:
        raise ConstraintViolated(f"face {a} has {n} < 6 edges")
    F = P.m
    x = P.prev_around(a, b)   # (x, b, c, y) consecutive around a
    y = P.next_around(a, c)
    cyc_a = list(P.face_cycles[a])
    t = cyc_a.index(b)
    rot = cyc_a[t:] + cyc_a[:t]          # b, c, y, ..., x
    new_a = [F] + rot[2:]
    edits = {
        a: new_a,
        b: _replace(P.face_cycles[b], a, F),
        c: _replace(P.face_cycles[c], a, F),
        x: _insert_between(P.face_cycles[x], b, a, F),
        y: _insert_between(P.face_cycles[y], a, c, F),
    }
    return _rebuild(P, edits, [a, x, b, c, y])


def cut(P: SimplePolytope, spec: CutSpec) -> SimplePolytope:
    if spec.kind == "edge":
        return cut_edge(P, *spec.target)
    if spec.kind == "two_adjacent_edges":
        return cut_two_edges(P, *spec.target, enforce_hexagon=spec.enforce_hexagon)
    if spec.kind == "vertex":
        return cut_vertex(P, *spec.target)
    raise InvalidTarget(f"unknown cut kind {spec.kind!r}")


def edge_cut_specs(P: SimplePolytope, avoid_quadrangles: bool = False) -> List[CutSpec]:
    out = []
    for a, b in P.edges:
        if avoid_quadrangles and (P.face_size(a) == 4 or P.face_size(b) == 4):
            continue
        out.append(CutSpec("edge", (a, b)))
    return out


def two_edge_cut_specs(P: SimplePolytope, min_size: int = 6) -> List[CutSpec]:
    out = []
    for a, cyc in enumerate(P.face_cycles):
        if len(cyc) < min_size:
            continue
        n = len(cyc)
        for t in range(n):
            out.append(CutSpec("two_adjacent_edges", (a, cyc[t], cyc[(t + 1) % n]),
                               enforce_hexagon=min_size >= 6))
    return out


def vertex_cut_specs(P: SimplePolytope) -> List[CutSpec]:
    return [CutSpec("vertex", v) for v in P.vertices]


# ---------------------------------------------------------------------------
# edge-twists on 4-valent graphs


@dataclass(frozen=True)
class EdgeTwistSpec:
    """Two disjoint edges ``(u, v)`` and ``(x, y)`` lying on a common face.

    ``side`` selects the face when both edges lie on two common faces.
    ``restricted`` requires the two edges to be separated by exactly one edge
    along that face.
    """

    edge_a: Tuple[int, int]
    edge_b: Tuple[int, int]
    restricted: bool = True
    side: int = 0


def edge_twist(G: QuadGraph, spec: EdgeTwistSpec) -> QuadGraph:
    """Twist two edges of a face so that they cross in a new 4-valent vertex.

    With face boundary ``a1 a2 ... b1 b2 ...`` and edges ``a1a2``, ``b1b2``,
    both edges are removed and a vertex ``w`` joined to ``a1, a2, b1, b2`` is
    added inside the merged region; the face splits in two and the faces
    across the removed edges each grow by one.
    """
    (u, v), (x, y) = spec.edge_a, spec.edge_b
    if len({u, v, x, y}) < 4:
        raise NotDisjoint("the two edges share a vertex")
    common = sorted(set(G.face_containing(u, v)) & set(G.face_containing(x, y)))
    if not common:
        raise NotSameFace("the two edges do not lie on a common face")
    face = G.faces[common[min(spec.side, len(common) - 1)]]
    n = len(face)
    pos = {w: t for t, w in enumerate(face)}
    # orient both edges along the traversal of the face
    a1, a2 = (u, v) if pos[v] == (pos[u] + 1) % n else (v, u)
    b1, b2 = (x, y) if pos[y] == (pos[x] + 1) % n else (y, x)
    if spec.restricted:
        gap1 = (pos[b1] - pos[a2]) % n
        gap2 = (pos[a1] - pos[b2]) % n
        if 1 not in (gap1, gap2):
            raise NotRestricted("edges are not separated by a single edge of the face")
    w = G.n_vertices
    rot = [list(r) for r in G.rotation]
    rot[a1] = _replace(rot[a1], a2, w)
    rot[a2] = _replace(rot[a2], a1, w)
    rot[b1] = _replace(rot[b1], b2, w)
    rot[b2] = _replace(rot[b2], b1, w)
    # the merged region meets a2, b1, b2, a1 in this cyclic order
    for order in ((a2, b1, b2, a1), (a1, b2, b1, a2)):
        try:
            return QuadGraph(rot + [list(order)])
        except ValidationError:
            continue
    raise ValidationError("edge-twist produced a non-spherical graph")


def edge_untwist(G: QuadGraph, w: int) -> QuadGraph:
    """Inverse of ``edge_twist`` at the vertex ``w`` it created.

    Removes ``w`` and reconnects its neighbours in the two pairs that are
    consecutive in the rotation around ``w`` on the side of the split face.
    The vertex ``w`` must be the last vertex (as produced by edge_twist).
    """
    if w != G.n_vertices - 1:
        raise InvalidTarget("only the most recently added vertex can be untwisted")
    r = G.rotation[w]
    last_error = None
    for shift in (0, 1):
        p, q, s, t = r[shift:] + r[:shift]
        # pairs (t, p) and (q, s) become edges again
        rot = [list(x) for x in G.rotation[:-1]]
        try:
            rot[t] = _replace(rot[t], w, p)
            rot[p] = _replace(rot[p], w, t)
            rot[q] = _replace(rot[q], w, s)
            rot[s] = _replace(rot[s], w, q)
            return QuadGraph(rot)
        except ValidationError as exc:
            last_error = exc
    raise ValidationError(f"cannot untwist at {w}: {last_error}")


def restricted_twist_specs(G: QuadGraph) -> List[EdgeTwistSpec]:
    out = []
    for fi, face in enumerate(G.faces):
        n = len(face)
        if n < 4:
            continue
        for t in range(n):
            ea = (face[t], face[(t + 1) % n])
            eb = (face[(t + 2) % n], face[(t + 3) % n])
            if len(set(ea) | set(eb)) < 4:
                continue
            common = sorted(set(G.face_containing(*ea)) & set(G.face_containing(*eb)))
            out.append(EdgeTwistSpec(ea, eb, True, common.index(fi)))
    return out


# ---------------------------------------------------------------------------
# enumeration


def _workers(threads: Optional[int]) -> int:
    if threads is None:
        threads = int(os.environ.get("POLYRIG_THREADS", "1") or 1)
    return max(1, threads)


def _children(args):
    P, moves = args
    out = []
    for spec in moves(P):
        try:
            Q = cut(P, spec)
        except ValidationError:
            continue
        out.append((Q.code, Q))
    return out


def _closure(seeds: Iterable[SimplePolytope], moves, keep, m_max: int,
             threads: Optional[int] = None, progress=None) -> List[SimplePolytope]:
    found: Dict[bytes, SimplePolytope] = {}
    frontier = []
    for P in seeds:
        if P.m <= m_max and keep(P) and P.code not in found:
            found[P.code] = P
            frontier.append(P)
    workers = _workers(threads)
    pool = ProcessPoolExecutor(workers) if workers > 1 else None
    try:
        while frontier:
            frontier.sort(key=lambda Q: (Q.m, Q.code))
            work = [(P, moves) for P in frontier if P.m < m_max]
            results = pool.map(_children, work, chunksize=4) if pool else map(_children, work)
            nxt = []
            for batch in results:
                for code, Q in batch:
                    if code in found or not keep(Q):
                        continue
                    found[code] = Q
                    nxt.append(Q)
            if progress:
                progress(f"closure: {len(found)} polytopes, frontier {len(nxt)}")
            frontier = nxt
    finally:
        if pool:
            pool.shutdown()
    return sorted(found.values(), key=lambda Q: (Q.m, Q.code))


def _check_bound(m_max: int, bound: int) -> None:
    if m_max > bound:
        raise BoundTooLarge(f"m_max={m_max} exceeds the enumeration bound {bound}")


def simple_moves(P: SimplePolytope) -> List[CutSpec]:
    return vertex_cut_specs(P) + edge_cut_specs(P) + two_edge_cut_specs(P, min_size=4)


def flag_moves(P: SimplePolytope) -> List[CutSpec]:
    return edge_cut_specs(P) + two_edge_cut_specs(P, min_size=6)


def almost_pogorelov_moves(P: SimplePolytope) -> List[CutSpec]:
    return edge_cut_specs(P, avoid_quadrangles=True) + two_edge_cut_specs(P, min_size=6)


def enumerate_simple(m_max: int, bound: int = 10, threads: Optional[int] = None,
                     progress=None) -> List[SimplePolytope]:
    """All simple 3-polytopes with at most m_max faces (vertex, edge and
    two-edge truncations starting from the simplex)."""
    _check_bound(m_max, bound)
    return _closure([simplex()], simple_moves, lambda P: True, m_max, threads, progress)


def enumerate_flag(m_max: int, bound: int = DEFAULT_ENUMERATION_BOUND,
                   threads: Optional[int] = None, progress=None) -> List[SimplePolytope]:
    from .belts import is_flag

    _check_bound(m_max, bound)
    if m_max < 6:
        return []
    return _closure([cube()], flag_moves, is_flag, m_max, threads, progress)


def enumerate_almost_pogorelov(m_max: int, bound: int = DEFAULT_ENUMERATION_BOUND,
                               threads: Optional[int] = None,
                               progress=None) -> List[SimplePolytope]:
    from .belts import is_almost_pogorelov

    _check_bound(m_max, bound)
    grown = _closure([associahedron()], almost_pogorelov_moves, is_almost_pogorelov,
                     m_max, threads, progress)
    extra = [P for P in (cube(), prism(5)) if P.m <= m_max]
    out = {P.code: P for P in grown + extra}
    return sorted(out.values(), key=lambda Q: (Q.m, Q.code))


def enumerate_ideal_graphs(m_max: int, bound: int = DEFAULT_IDEAL_BOUND,
                           progress=None) -> List[Tuple[QuadGraph, SimplePolytope]]:
    """Antiprisms plus the restricted-twist closure of the 4-antiprism,
    paired with their vertex-cut polytopes, sorted by (m, code)."""
    _check_bound(m_max, bound)
    found: Dict[bytes, Tuple[QuadGraph, SimplePolytope]] = {}
    k = 3
    while 4 * k + 2 <= m_max:
        G = antiprism_graph(k)
        P = cut_4_valent_vertices(G)
        found.setdefault(P.code, (G, P))
        k += 1
    frontier = []
    if 18 <= m_max:
        G = antiprism_graph(4)
        frontier = [G]
    while frontier:
        nxt = []
        for G in frontier:
            if G.n_vertices + len(G.faces) + 2 > m_max:
                continue
            for spec in restricted_twist_specs(G):
                try:
                    H = edge_twist(G, spec)
                    Q = cut_4_valent_vertices(H)
                except ValidationError:
                    continue
                if Q.code in found:
                    continue
                found[Q.code] = (H, Q)
                nxt.append(H)
        if progress:
            progress(f"ideal closure: {len(found)} polytopes")
        frontier = nxt
    return sorted(found.values(), key=lambda t: (t[1].m, t[1].code))


def enumerate_ideal_almost_pogorelov(m_max: int, bound: int = DEFAULT_IDEAL_BOUND,
                                     progress=None) -> List[SimplePolytope]:
    return [P for _, P in enumerate_ideal_graphs(m_max, bound, progress)]


FAMILIES = {
    "simple": enumerate_simple,
    "flag": enumerate_flag,
    "apog": enumerate_almost_pogorelov,
    "iapog": enumerate_ideal_almost_pogorelov,
}


def census(polytopes: Iterable[SimplePolytope], m_min: int, m_max: int) -> Dict[int, int]:
    out = {m: 0 for m in range(m_min, m_max + 1)}
    for P in polytopes:
        if m_min <= P.m <= m_max:
            out[P.m] += 1
    return out


FAMILY_MIN_FACES = {"simple": 4, "flag": 6, "apog": 6, "iapog": 14}


def enumerate_family(family: str, m_max: int, threads: Optional[int] = None,
                     progress=None) -> List[SimplePolytope]:
    if family not in FAMILIES:
        raise InvalidInput(f"unknown family {family!r}; choose from {sorted(FAMILIES)}")
    if family == "iapog":
        return enumerate_ideal_almost_pogorelov(m_max, progress=progress)
    return FAMILIES[family](m_max, threads=threads, progress=progress)


def family_census(family: str, polytopes: Iterable[SimplePolytope], m_max: int) -> Dict[int, int]:
    """Counts per face number; the ideal family only has even m."""
    out = census(polytopes, FAMILY_MIN_FACES[family], m_max)
    if family == "iapog":
        out = {m: c for m, c in out.items() if m % 2 == 0}
    return out

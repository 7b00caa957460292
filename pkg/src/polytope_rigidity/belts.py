"""k-belts, family classification, separating belts and good/bad pairs."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations
from typing import Dict, Iterator, List, Optional, Tuple

from .errors import InvalidPair, NotDisjoint, NotFlag
from .polytope import SimplePolytope, bits, mask_of, n2_pairs, popcount


@dataclass(frozen=True, order=True)
class Belt:
    faces: Tuple[int, ...]
    trivial_sides: Tuple[int, ...] = ()
    sides: Tuple[int, int] = field(default=(0, 0), compare=False)

    @property
    def k(self) -> int:
        return len(self.faces)

    @property
    def mask(self) -> int:
        return mask_of(self.faces)

    @property
    def trivial(self) -> bool:
        return bool(self.trivial_sides)

    def to_dict(self) -> dict:
        return {"faces": list(self.faces), "trivial_sides": list(self.trivial_sides)}


def _canonical_cycle(cycle) -> Tuple[int, ...]:
    n = len(cycle)
    t = cycle.index(min(cycle))
    fwd = tuple(cycle[(t + s) % n] for s in range(n))
    bwd = tuple(cycle[(t - s) % n] for s in range(n))
    return min(fwd, bwd)


def complement_components(P: SimplePolytope, mask: int) -> List[int]:
    """Connected components (as masks) of the faces outside ``mask``."""
    rest = P.full_mask & ~mask
    comps = []
    while rest:
        seed = rest & -rest
        comp = seed
        frontier = seed
        while frontier:
            nxt = 0
            for i in bits(frontier):
                nxt |= P.nbr[i]
            nxt &= rest & ~comp
            comp |= nxt
            frontier = nxt
        comps.append(comp)
        rest &= ~comp
    comps.sort(key=lambda c: (c & -c))
    return comps


def make_belt(P: SimplePolytope, cycle) -> Belt:
    faces = _canonical_cycle(list(cycle))
    comps = complement_components(P, mask_of(faces))
    trivial = tuple(bits(c)[0] for c in comps if popcount(c) == 1)
    sides = tuple(comps) if len(comps) == 2 else (comps + [0, 0])[:2]
    return Belt(faces, trivial, sides)


def _belt_cycles(P: SimplePolytope, k_min: int, k_max: int) -> Iterator[Tuple[int, ...]]:
    """Induced cycles of the face-adjacency graph with lengths in [k_min, k_max],
    excluding triangles of faces that meet at a vertex.  Each cycle is produced
    once, starting at its smallest face with the smaller neighbour second."""
    nbr = P.nbr
    k_min = max(k_min, 3)
    for s in range(P.m):
        above = P.full_mask & ~((1 << (s + 1)) - 1)
        path = [s]
        blocked = [0]  # union of neighbours of interior path faces

        def extend():
            L = len(path)
            last = path[-1]
            cand = nbr[last] & above & ~blocked[-1]
            for c in bits(cand):
                if c in path:
                    continue
                closes = L >= 2 and bool(nbr[c] >> s & 1)
                if closes:
                    if L + 1 < k_min or path[1] > c:
                        continue
                    if L + 1 == 3 and P.is_vertex_mask((1 << s) | (1 << path[1]) | (1 << c)):
                        continue
                    yield tuple(path) + (c,)
                    continue
                if L + 1 >= k_max:
                    continue
                path.append(c)
                blocked.append(blocked[-1] | (nbr[last] if L >= 2 else 0))
                yield from extend()
                path.pop()
                blocked.pop()

        yield from extend()


def enumerate_belts(P: SimplePolytope, k: int) -> List[Belt]:
    if k < 3 or k > P.m:
        return []
    return sorted(make_belt(P, c) for c in _belt_cycles(P, k, k))


def enumerate_belts_upto(P: SimplePolytope, k_max: int, k_min: int = 3) -> Dict[int, List[Belt]]:
    out: Dict[int, List[Belt]] = {k: [] for k in range(k_min, k_max + 1)}
    for c in _belt_cycles(P, k_min, k_max):
        out[len(c)].append(make_belt(P, c))
    for v in out.values():
        v.sort()
    return out


@lru_cache(maxsize=64)
def all_belts(P: SimplePolytope) -> Tuple[Belt, ...]:
    """Every belt of P, of any length (intended for small m)."""
    return tuple(sorted((make_belt(P, c) for c in _belt_cycles(P, 3, P.m)),
                        key=lambda b: (b.k, b.faces)))


def enumerate_belts_naive(P: SimplePolytope, k: int) -> List[Tuple[int, ...]]:
    """Subset filter: k faces whose induced adjacency graph is a single cycle."""
    out = []
    for sub in combinations(range(P.m), k):
        mask = mask_of(sub)
        if any(popcount(P.nbr[i] & mask) != 2 for i in sub):
            continue
        # connected?
        seen, stack = {sub[0]}, [sub[0]]
        while stack:
            i = stack.pop()
            for j in bits(P.nbr[i] & mask):
                if j not in seen:
                    seen.add(j)
                    stack.append(j)
        if len(seen) != k:
            continue
        if k == 3 and P.is_vertex_mask(mask):
            continue
        out.append(sub)
    return out


def belt_census(P: SimplePolytope, k_max: int = 6) -> Dict[int, Tuple[int, int]]:
    """k -> (trivial count, nontrivial count)."""
    out = {}
    for k, belts in enumerate_belts_upto(P, k_max).items():
        t = sum(1 for b in belts if b.trivial)
        out[k] = (t, len(belts) - t)
    return out


def face_ring(P: SimplePolytope, i: int) -> Tuple[int, ...]:
    return P.face_cycles[i]


# ---------------------------------------------------------------------------
# families


def is_flag(P: SimplePolytope) -> bool:
    return P.m > 4 and not any(True for _ in _belt_cycles(P, 3, 3))


def is_flag_direct(P: SimplePolytope) -> bool:
    """Every set of pairwise adjacent faces has a common vertex."""
    for a, b in P.edges:
        common = P.nbr[a] & P.nbr[b]
        for c in bits(common):
            if not P.is_vertex_mask((1 << a) | (1 << b) | (1 << c)):
                return False
            # a fourth face adjacent to all three can never share their vertex
            if P.nbr[a] & P.nbr[b] & P.nbr[c]:
                return False
    return True


def is_almost_pogorelov(P: SimplePolytope) -> bool:
    return is_flag(P) and all(b.trivial for b in enumerate_belts(P, 4))


def is_pogorelov(P: SimplePolytope) -> bool:
    return is_flag(P) and not enumerate_belts(P, 4)


def every_vertex_on_unique_quadrangle(P: SimplePolytope) -> bool:
    q = P.quad_mask
    return all(popcount(mask_of(v) & q) == 1 for v in P.vertices)


class FamilyClass(enum.Enum):
    Simplex = "simplex"
    NonFlag = "non-flag"
    AlmostFlagOnly = "almost-flag"
    Flag = "flag"
    AlmostPogorelov = "almost-pogorelov"
    IdealAlmostPogorelov = "ideal-almost-pogorelov"
    Pogorelov = "pogorelov"
    StronglyPogorelov = "strongly-pogorelov"


@dataclass(frozen=True)
class Classification:
    family: FamilyClass
    has_3_belt: bool
    all_3_belts_trivial: bool
    has_4_belt: bool
    all_4_belts_trivial: bool
    has_nontrivial_5_belt: bool
    every_vertex_on_unique_quadrangle: bool

    def belongs_to(self, family: FamilyClass) -> bool:
        """Membership in the (non-exclusive) family, as opposed to ``family``
        which is the most specific class."""
        F = FamilyClass
        if family is F.Simplex:
            return self.family is F.Simplex
        if self.family is F.Simplex:
            return family is F.AlmostFlagOnly
        flag = not self.has_3_belt
        if family is F.NonFlag:
            return not flag
        if family is F.AlmostFlagOnly:
            return self.all_3_belts_trivial
        if not flag:
            return False
        if family is F.Flag:
            return True
        if family is F.AlmostPogorelov:
            return self.all_4_belts_trivial
        if family is F.IdealAlmostPogorelov:
            return self.all_4_belts_trivial and self.every_vertex_on_unique_quadrangle
        if family is F.Pogorelov:
            return not self.has_4_belt
        return not self.has_4_belt and not self.has_nontrivial_5_belt

    def to_dict(self) -> dict:
        return {
            "family": self.family.value,
            "has_3_belt": self.has_3_belt,
            "all_3_belts_trivial": self.all_3_belts_trivial,
            "has_4_belt": self.has_4_belt,
            "all_4_belts_trivial": self.all_4_belts_trivial,
            "has_nontrivial_5_belt": self.has_nontrivial_5_belt,
            "every_vertex_on_unique_quadrangle": self.every_vertex_on_unique_quadrangle,
        }


def classify_family(P: SimplePolytope) -> Classification:
    F = FamilyClass
    ideal = every_vertex_on_unique_quadrangle(P)
    b3 = enumerate_belts(P, 3)
    triv3 = all(b.trivial for b in b3)
    if P.m == 4:
        return Classification(F.Simplex, False, True, False, True, False, False)
    if b3:
        fam = F.AlmostFlagOnly if triv3 else F.NonFlag
        return Classification(fam, True, triv3, bool(enumerate_belts(P, 4)),
                              all(b.trivial for b in enumerate_belts(P, 4)),
                              any(not b.trivial for b in enumerate_belts(P, 5)), ideal)
    b4 = enumerate_belts(P, 4)
    triv4 = all(b.trivial for b in b4)
    nontriv5 = any(not b.trivial for b in enumerate_belts(P, 5))
    if b4:
        fam = F.Flag if not triv4 else (F.IdealAlmostPogorelov if ideal else F.AlmostPogorelov)
    else:
        fam = F.Pogorelov if nontriv5 else F.StronglyPogorelov
    return Classification(fam, False, True, bool(b4), triv4, nontriv5, ideal)


# ---------------------------------------------------------------------------
# separation


def _arcs(belt: Belt, i: int, j: int) -> Tuple[int, int]:
    f = belt.faces
    a, b = f.index(i), f.index(j)
    if a > b:
        a, b = b, a
    return mask_of(f[a + 1:b]), mask_of(f[b + 1:] + f[:a])


def _misses(P: SimplePolytope, k: int, arc: int) -> bool:
    return not (P.nbr[k] & arc) and not (arc >> k & 1)


@lru_cache(maxsize=4096)
def separable_faces(P: SimplePolytope, i: int, j: int, min_length: int = 4) -> int:
    """Mask of faces F_k for which some belt through F_i, F_j avoids F_k and
    F_k misses one of the two arcs of the belt between F_i and F_j."""
    out = 0
    pair = (1 << i) | (1 << j)
    for belt in all_belts(P):
        if belt.k < min_length or belt.mask & pair != pair:
            continue
        a1, a2 = _arcs(belt, i, j)
        miss1 = P.full_mask & ~belt.mask
        for arc in (a1, a2):
            for k in bits(miss1 & ~out):
                if _misses(P, k, arc):
                    out |= 1 << k
    return out


def separating_belt(P: SimplePolytope, i: int, j: int, k: int,
                    min_length: int = 4) -> Optional[Belt]:
    """Shortest belt through F_i and F_j that avoids F_k, with F_k missing one
    of the two arcs between F_i and F_j; ``None`` if there is none."""
    if len({i, j, k}) < 3:
        raise InvalidPair("faces must be pairwise distinct")
    if P.adjacent(i, j):
        raise NotDisjoint(f"faces {i} and {j} are adjacent")
    pair = (1 << i) | (1 << j)
    for belt in all_belts(P):
        if belt.k < min_length or belt.mask & pair != pair or belt.mask >> k & 1:
            continue
        if any(_misses(P, k, arc) for arc in _arcs(belt, i, j)):
            return belt
    return None


def meets_quadrangle_among(P: SimplePolytope, i: int, j: int, k: int) -> bool:
    return any(P.face_size(x) == 4 and P.adjacent(x, k) for x in (i, j))


def admissible_triples(P: SimplePolytope) -> Iterator[Tuple[int, int, int]]:
    for mask in n2_pairs(P):
        i, j = bits(mask)
        for k in range(P.m):
            if k != i and k != j:
                yield i, j, k


def apb_condition_violations(P: SimplePolytope) -> List[Tuple[int, int, int]]:
    """Triples where belt separability differs from 'F_k avoids the
    quadrangles among F_i, F_j'."""
    bad = []
    for i, j, k in admissible_triples(P):
        sep = bool(separable_faces(P, i, j) >> k & 1)
        if sep == meets_quadrangle_among(P, i, j, k):
            bad.append((i, j, k))
    return bad


def satisfies_apb_condition(P: SimplePolytope) -> bool:
    if not is_flag(P):
        raise NotFlag("the separation condition is stated for flag polytopes")
    return not apb_condition_violations(P)


def scc_violations(P: SimplePolytope, min_length: int = 5) -> List[Tuple[int, int, int]]:
    return [(i, j, k) for i, j, k in admissible_triples(P)
            if not separable_faces(P, i, j, min_length) >> k & 1]


# ---------------------------------------------------------------------------
# good and bad pairs


def _pair(P: SimplePolytope, x) -> Tuple[int, int]:
    if isinstance(x, int):
        x = bits(x)
    x = tuple(sorted(x))
    if len(x) != 2 or x[0] == x[1] or not (0 <= x[0] and x[1] < P.m) or P.adjacent(*x):
        raise InvalidPair(f"{x} is not a pair of disjoint faces")
    return x


def is_good_pair(P: SimplePolytope, omega_prime, omega) -> bool:
    """Is omega' = {s,t} good for omega = {p,q}?"""
    s, t = _pair(P, omega_prime)
    p, q = _pair(P, omega)
    if (s, t) == (p, q):
        raise InvalidPair("the two pairs must differ")
    sep = separable_faces(P, s, t)
    return bool((sep >> p & 1) or (sep >> q & 1))


def bad_pairs(P: SimplePolytope, omega) -> List[Tuple[int, int]]:
    p, q = _pair(P, omega)
    out = []
    for mask in n2_pairs(P):
        st = tuple(bits(mask))
        if st != (p, q) and not is_good_pair(P, st, (p, q)):
            out.append(st)
    return out


def bad_count_profile(P: SimplePolytope) -> List[int]:
    """Sorted multiset of bad-element counts over N2(P)."""
    return sorted(len(bad_pairs(P, mask)) for mask in n2_pairs(P))


def quad_alternating_belts(P: SimplePolytope, k_max: Optional[int] = None) -> List[Belt]:
    """(2k)-belts whose faces alternate between quadrangles and non-quadrangles."""
    sizes = P.face_sizes
    limit = P.m if k_max is None else min(P.m, k_max)
    out = []
    for c in _belt_cycles(P, 4, limit):
        n = len(c)
        if n % 2:
            continue
        if all((sizes[c[t]] == 4) != (sizes[c[(t + 1) % n]] == 4) for t in range(n)):
            out.append(make_belt(P, c))
    return sorted(out, key=lambda b: (b.k, b.faces))


def surrounding_belt(P: SimplePolytope, i: int) -> Optional[Belt]:
    """The neighbours of F_i in cyclic order, if they form a belt."""
    cyc = P.face_cycles[i]
    mask = mask_of(cyc)
    n = len(cyc)
    for t in range(n):
        if popcount(P.nbr[cyc[t]] & mask) != 2:
            return None
    if n == 3:
        return None
    return make_belt(P, cyc)

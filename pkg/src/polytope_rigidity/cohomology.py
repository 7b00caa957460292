"""Reduced cohomology of face unions and bigraded Betti numbers of Z_P.

For ω ⊂ [m] the union P_ω of the faces in ω is a disjoint union of spheres
with holes (or the whole sphere), so its reduced Betti numbers follow from the
number of components and the number of boundary cycles of each component.
That shortcut is the primary method; a cochain-complex reduction over the
integers on the full subcomplex of the dual sphere serves as an oracle.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import combinations
from typing import Dict, List, Optional, Tuple

import numpy as np

from .errors import BoundTooLarge, IsSimplex
from .linalg import elementary_divisors
from .polytope import SimplePolytope, bits, h_vector, mask_of, popcount

DEFAULT_SWEEP_BOUND = 20


@dataclass(frozen=True)
class OmegaBetti:
    omega: int
    b_neg1: int
    b0: int
    b1: int
    b2: int
    components: int = 0
    boundary_cycles: Tuple[int, ...] = ()
    torsion_free: bool = True

    @property
    def ranks(self) -> Tuple[int, int, int, int]:
        return (self.b_neg1, self.b0, self.b1, self.b2)


def _components(P: SimplePolytope, omega: int) -> List[int]:
    comps = []
    rest = omega
    while rest:
        comp = frontier = rest & -rest
        while frontier:
            nxt = 0
            for i in bits(frontier):
                nxt |= P.nbr[i]
            nxt &= rest & ~comp
            comp |= nxt
            frontier = nxt
        comps.append(comp)
        rest &= ~comp
    return comps


def boundary_cycles(P: SimplePolytope, omega: int) -> List[List[Tuple[int, int]]]:
    """Boundary cycles of P_ω as lists of sides (f, g): f in ω, g outside."""
    seen = set()
    cycles = []
    for f in bits(omega):
        for g in P.face_cycles[f]:
            if omega >> g & 1 or (f, g) in seen:
                continue
            cyc = []
            side = (f, g)
            while side not in seen:
                seen.add(side)
                cyc.append(side)
                a, b = side
                h = P.next_around(a, b)
                side = (h, b) if omega >> h & 1 else (a, h)
            cycles.append(cyc)
    return cycles


def omega_betti(P: SimplePolytope, omega: int) -> OmegaBetti:
    """Reduced Betti numbers of P_ω by counting components and boundary cycles."""
    omega &= P.full_mask
    if omega == 0:
        return OmegaBetti(0, 1, 0, 0, 0)
    if omega == P.full_mask:
        return OmegaBetti(omega, 0, 0, 0, 1, 1, (0,))
    comps = _components(P, omega)
    per = {c: 0 for c in comps}
    for cyc in boundary_cycles(P, omega):
        f = cyc[0][0]
        owner = next(c for c in comps if c >> f & 1)
        per[owner] += 1
    counts = tuple(per[c] for c in comps)
    return OmegaBetti(omega, 0, len(comps) - 1, sum(n - 1 for n in counts), 0,
                      len(comps), counts)


def full_subcomplex(P: SimplePolytope, omega: int):
    """Simplices of the dual sphere spanned by the faces in ω."""
    verts = bits(omega)
    edges = [e for e in P.edges if omega >> e[0] & 1 and omega >> e[1] & 1]
    tris = [t for t in P.vertices if all(omega >> x & 1 for x in t)]
    return verts, edges, tris


def _coboundary(lower, upper) -> List[List[int]]:
    # rows indexed by ``upper`` simplices, columns by ``lower`` ones
    index = {s: n for n, s in enumerate(lower)}
    out = []
    for s in upper:
        row = [0] * len(lower)
        for t in range(len(s)):
            face = s[:t] + s[t + 1:]
            row[index[face]] = (-1) ** t
        out.append(row)
    return out


def omega_betti_chain(P: SimplePolytope, omega: int) -> OmegaBetti:
    """Oracle: integer reduction of the augmented cochain complex of the
    full subcomplex on ω."""
    omega &= P.full_mask
    verts, edges, tris = full_subcomplex(P, omega)
    layers = [[()], [(v,) for v in verts], list(edges), list(tris)]
    ranks = []
    torsion_free = True
    for lo, hi in zip(layers, layers[1:]):
        if not lo or not hi:
            ranks.append(0)
            continue
        d = _coboundary(lo, hi)
        div = elementary_divisors(d)
        torsion_free &= all(x == 1 for x in div)
        ranks.append(len(div))
    dims = [len(x) for x in layers]
    betti = []
    for i in range(4):
        into = ranks[i - 1] if i > 0 else 0
        out = ranks[i] if i < 3 else 0
        betti.append(dims[i] - out - into)
    return OmegaBetti(omega, *betti, torsion_free=torsion_free)


# ---------------------------------------------------------------------------
# bigraded table


@dataclass
class BettiTable:
    m: int
    bigraded: Dict[Tuple[int, int], int]
    total: List[int]
    b0: Optional[np.ndarray] = field(default=None, repr=False)
    b1: Optional[np.ndarray] = field(default=None, repr=False)

    def beta(self, i: int, j: int) -> int:
        """β^{-i,2j}."""
        return self.bigraded.get((i, j), 0)

    def rank(self, k: int) -> int:
        return self.total[k] if 0 <= k < len(self.total) else 0

    def omega_ranks(self, omega: int) -> Tuple[int, int]:
        return int(self.b0[omega]), int(self.b1[omega])

    def to_dict(self) -> dict:
        return {
            "m": self.m,
            "bigraded": [[i, j, r] for (i, j), r in sorted(self.bigraded.items())],
            "total": list(self.total),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    def format_table(self) -> str:
        """Aligned two-row table of H^k(Z_P) for k = 0..m+3."""
        ks = [str(k) for k in range(len(self.total))]
        groups = ["0" if r == 0 else ("Z" if r == 1 else f"Z^{r}") for r in self.total]
        width = [max(len(a), len(b)) for a, b in zip(ks, groups)]
        head = "k       | " + " | ".join(a.rjust(w) for a, w in zip(ks, width))
        body = "H^k(Z_P)| " + " | ".join(b.rjust(w) for b, w in zip(groups, width))
        rule = "-" * len(head)
        return "\n".join([rule, head, rule, body, rule])


def _assemble(m: int, sizes: np.ndarray, b0: np.ndarray, b1: np.ndarray) -> BettiTable:
    bigraded: Dict[Tuple[int, int], int] = {(0, 0): 1, (m - 3, m): 1}
    total = [0] * (m + 4)
    total[0] = 1
    total[m + 3] = 1
    for j in range(1, m):
        sel = sizes == j
        r0 = int(b0[sel].sum())
        r1 = int(b1[sel].sum())
        if r0:
            bigraded[(j - 1, j)] = bigraded.get((j - 1, j), 0) + r0
            total[j + 1] += r0
        if r1:
            bigraded[(j - 2, j)] = bigraded.get((j - 2, j), 0) + r1
            total[j + 2] += r1
    return BettiTable(m, bigraded, total, b0, b1)


def sweep_ranks(P: SimplePolytope) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Per-subset (|ω|, b0, b1) for every ω, vectorised over all 2^m masks.

    Components come from label propagation along edges inside ω; b1 follows
    from the Euler characteristic of the full subcomplex, since each component
    of P_ω is a planar surface: χ = components − b1.
    """
    m = P.m
    masks = np.arange(1 << m, dtype=np.int64)
    inside = [((masks >> i) & 1).astype(bool) for i in range(m)]
    sizes = np.zeros(1 << m, dtype=np.int64)
    for col in inside:
        sizes += col
    chi = sizes.copy()
    for a, b in P.edges:
        chi -= inside[a] & inside[b]
    for a, b, c in P.vertices:
        chi += inside[a] & inside[b] & inside[c]
    big = np.int8(m) if m < 127 else np.int16(m)
    dtype = np.int8 if m < 127 else np.int16
    labels = [np.where(inside[i], dtype(i), big) for i in range(m)]
    changed = True
    while changed:
        changed = False
        for a, b in P.edges:
            both = inside[a] & inside[b]
            lo = np.minimum(labels[a], labels[b])
            upd_a = both & (lo < labels[a])
            upd_b = both & (lo < labels[b])
            if upd_a.any():
                labels[a] = np.where(upd_a, lo, labels[a])
                changed = True
            if upd_b.any():
                labels[b] = np.where(upd_b, lo, labels[b])
                changed = True
    comps = np.zeros(1 << m, dtype=np.int64)
    for i in range(m):
        comps += labels[i] == i
    b0 = np.maximum(comps - 1, 0)
    b1 = comps - chi
    # the empty set and the whole sphere fall outside the surface formula
    b0[0] = b1[0] = 0
    b0[-1] = b1[-1] = 0
    return sizes, b0.astype(np.int16), b1.astype(np.int16)


def bigraded_betti(P: SimplePolytope, bound: int = DEFAULT_SWEEP_BOUND) -> BettiTable:
    if P.m > bound:
        raise BoundTooLarge(f"m={P.m} exceeds the subset-sweep bound {bound}")
    sizes, b0, b1 = sweep_ranks(P)
    return _assemble(P.m, sizes, b0, b1)


def bigraded_betti_naive(P: SimplePolytope) -> BettiTable:
    """Same table from independent per-subset surface computations."""
    n = 1 << P.m
    sizes = np.array([popcount(w) for w in range(n)], dtype=np.int64)
    b0 = np.zeros(n, dtype=np.int16)
    b1 = np.zeros(n, dtype=np.int16)
    for w in range(1, n - 1):
        r = omega_betti(P, w)
        b0[w], b1[w] = r.b0, r.b1
    return _assemble(P.m, sizes, b0, b1)


# ---------------------------------------------------------------------------
# identities


def three_belt_count_via_betti(P: SimplePolytope) -> int:
    """β^{-1,6}: rank of H̃^1 summed over triples of faces."""
    return sum(omega_betti(P, mask_of(t)).b1 for t in combinations(range(P.m), 3))


def rank_h4(P: SimplePolytope) -> int:
    """rk H^4(Z_P) = Σ_{|ω|=3} rk H̃^0(P_ω) (pairs never carry H̃^1)."""
    return sum(omega_betti(P, mask_of(t)).b0 for t in combinations(range(P.m), 3))


def flag_h4_value(m: int) -> int:
    return (m - 2) * (m - 4) * (m - 6) // 3


def flag_h4_criterion(P: SimplePolytope) -> bool:
    if P.m == 4:
        raise IsSimplex("the H^4 flagness test excludes the simplex")
    return rank_h4(P) == flag_h4_value(P.m)


def _poly_mul(a: List[int], b: List[int]) -> List[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def poincare_sides(P: SimplePolytope, table: Optional[BettiTable] = None):
    """Both sides of the bigraded Poincaré series identity as coefficient
    lists in s = t^2."""
    if table is None:
        table = bigraded_betti(P)
    h = list(h_vector(P))
    left = h
    for _ in range(P.m - 3):
        left = _poly_mul(left, [1, -1])
    right = [0] * (P.m + 1)
    for (i, j), r in table.bigraded.items():
        right[j] += (-1) ** i * r
    n = max(len(left), len(right))
    left += [0] * (n - len(left))
    right += [0] * (n - len(right))
    return left, right


def verify_poincare_series(P: SimplePolytope, table: Optional[BettiTable] = None) -> bool:
    left, right = poincare_sides(P, table)
    return left == right


def check_duality(table: BettiTable) -> bool:
    m = table.m
    return all(table.beta(m - 3 - i, m - j) == r for (i, j), r in table.bigraded.items())

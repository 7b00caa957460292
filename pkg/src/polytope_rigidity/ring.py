"""Multiplicative structure of H*(Z_P).

The ring is modelled by the squarefree Koszul algebra of the dual sphere K:
basis monomials u_A v_σ with σ a simplex of K and A disjoint from σ,
d u_i = v_i, u's anticommute and v's commute.  The monomials with
A ⊔ σ = ω span a cochain complex whose cohomology in layer s = |σ| - 1 is
H̃^s(P_ω); the product of two monomials with disjoint multidegrees is
±u_{A1∪A2} v_{σ1∪σ2} (zero unless σ1 ∪ σ2 ∈ K).

Every nonzero block (ω, s) gets an integral basis of cocycles and a reducer
taking any cocycle to its coordinates.  Products are computed on cocycle
representatives and reduced, and are cached per pair of blocks.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

from .cohomology import sweep_ranks
from .errors import (
    BoundTooLarge,
    InvalidOmega,
    MixedTables,
    NotFlag,
    OutOfFamily,
)
from .linalg import SparseEchelon, determinant, integer_kernel, integer_solve, inverse, kernel
from .polytope import SimplePolytope, bits, mask_of, n2_pairs, popcount

DEFAULT_RING_BOUND = 14

Key = Tuple[int, int]          # (omega mask, layer)
BasisId = Tuple[int, int, int]  # (omega mask, layer, index)


def _inversions(a1: int, a2: int) -> int:
    # number of pairs x in a1, y in a2 with x > y
    return sum(popcount(a1 >> (y + 1)) for y in bits(a2))


@dataclass
class Block:
    omega: int
    layer: int
    cochains: List[int]            # simplices σ (masks), sorted
    reps: List[Dict[int, int]]     # integral cocycle representatives
    reducer: List[List[Fraction]]  # rank x len(cochains)

    @property
    def rank(self) -> int:
        return len(self.reps)


class RingElement:
    """Sparse combination of basis elements of a RingTable."""

    __slots__ = ("table", "coeffs")

    def __init__(self, table: "RingTable", coeffs: Optional[Dict[BasisId, object]] = None):
        self.table = table
        self.coeffs = {k: v for k, v in (coeffs or {}).items() if v}

    def __repr__(self) -> str:
        terms = ", ".join(f"{k}: {v}" for k, v in sorted(self.coeffs.items()))
        return f"RingElement({{{terms}}})"

    def _check(self, other: "RingElement") -> None:
        if other.table is not self.table:
            raise MixedTables("elements belong to different ring tables")

    def __add__(self, other: "RingElement") -> "RingElement":
        self._check(other)
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = out.get(k, 0) + v
        return RingElement(self.table, out)

    def __neg__(self) -> "RingElement":
        return RingElement(self.table, {k: -v for k, v in self.coeffs.items()})

    def __sub__(self, other: "RingElement") -> "RingElement":
        return self + (-other)

    def scale(self, c) -> "RingElement":
        return RingElement(self.table, {k: c * v for k, v in self.coeffs.items()})

    def __rmul__(self, c) -> "RingElement":
        return self.scale(c)

    def __mul__(self, other):
        if isinstance(other, RingElement):
            return multiply(self.table, self, other)
        return self.scale(other)

    def __eq__(self, other) -> bool:
        return (isinstance(other, RingElement) and other.table is self.table
                and self.coeffs == other.coeffs)

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def blocks(self) -> Dict[Key, Dict[int, object]]:
        out: Dict[Key, Dict[int, object]] = {}
        for (w, s, i), v in self.coeffs.items():
            out.setdefault((w, s), {})[i] = v
        return out

    def degrees(self) -> set:
        return {self.table.degree(w, s) for (w, s, _) in self.coeffs}

    def to_dict(self) -> dict:
        return {"terms": [[w, s, i, str(v)] for (w, s, i), v in sorted(self.coeffs.items())]}


class RingTable:
    """Lazily evaluated multiplication table of H*(Z_P).

    ``coeff='z'`` keeps integer coordinates (and checks that every reduction
    stays integral); ``coeff='q'`` works over the rationals.
    """

    def __init__(self, P: SimplePolytope, coeff: str = "z", bound: int = DEFAULT_RING_BOUND):
        if coeff not in ("z", "q"):
            raise ValueError("coeff must be 'z' or 'q'")
        if P.m > bound:
            raise BoundTooLarge(f"m={P.m} exceeds the ring bound {bound}")
        self.P = P
        self.m = P.m
        self.coeff = coeff
        self.full = P.full_mask
        self._simplex = {0} | {1 << i for i in range(P.m)}
        self._simplex |= {mask_of(e) for e in P.edges}
        self._simplex |= {mask_of(v) for v in P.vertices}
        by_size: Dict[int, List[int]] = {0: [0], 1: [], 2: [], 3: []}
        for s in self._simplex:
            if s:
                by_size[popcount(s)].append(s)
        self._by_size = {k: sorted(v) for k, v in by_size.items()}
        _, b0, b1 = sweep_ranks(P)
        self._b0 = b0
        self._b1 = b1
        self._blocks: Dict[Key, Block] = {}
        self._products: Dict[Tuple[Key, Key], Optional[list]] = {}

    # -- ranks and keys ---------------------------------------------------

    def rank(self, omega: int, layer: int) -> int:
        if layer == -1:
            return int(omega == 0)
        if layer == 2:
            return int(omega == self.full)
        if omega == 0 or omega == self.full or layer not in (0, 1):
            return 0
        return int((self._b0 if layer == 0 else self._b1)[omega])

    def degree(self, omega: int, layer: int) -> int:
        return popcount(omega) + layer + 1

    def keys(self) -> List[Key]:
        out = [(0, -1)]
        for w in range(1, self.full):
            for s in (0, 1):
                if self.rank(w, s):
                    out.append((w, s))
        out.append((self.full, 2))
        out.sort(key=lambda k: (self.degree(*k), k))
        return out

    def basis(self) -> List[BasisId]:
        return [(w, s, i) for (w, s) in self.keys() for i in range(self.rank(w, s))]

    @property
    def dimension(self) -> int:
        return sum(self.rank(w, s) for w, s in self.keys())

    def ranks_by_degree(self) -> List[int]:
        out = [0] * (self.m + 4)
        for w, s in self.keys():
            out[self.degree(w, s)] += self.rank(w, s)
        return out

    # -- cochain level ------------------------------------------------------

    def cochains(self, omega: int, layer: int) -> List[int]:
        if layer < -1 or layer > 2:
            return []
        return [s for s in self._by_size[layer + 1] if s & ~omega == 0]

    def coboundary(self, omega: int, cochain: Dict[int, int]) -> Dict[int, int]:
        out: Dict[int, int] = {}
        for sigma, c in cochain.items():
            free = omega & ~sigma
            for a in bits(free):
                tau = sigma | (1 << a)
                if tau not in self._simplex:
                    continue
                sign = -1 if popcount(free & ((1 << a) - 1)) & 1 else 1
                out[tau] = out.get(tau, 0) + sign * c
        return {k: v for k, v in out.items() if v}

    def _d_matrix(self, omega: int, low: int) -> Tuple[List[int], List[int], List[List[int]]]:
        lower = self.cochains(omega, low)
        upper = self.cochains(omega, low + 1)
        index = {s: n for n, s in enumerate(upper)}
        mat = [[0] * len(lower) for _ in upper]
        for col, sigma in enumerate(lower):
            for tau, c in self.coboundary(omega, {sigma: 1}).items():
                mat[index[tau]][col] = c
        return lower, upper, mat

    def cochain_product(self, k1: Key, x: Dict[int, int], k2: Key, y: Dict[int, int]) -> Dict[int, int]:
        w1, w2 = k1[0], k2[0]
        if w1 & w2:
            return {}
        out: Dict[int, int] = {}
        for s1, c1 in x.items():
            a1 = w1 & ~s1
            for s2, c2 in y.items():
                sigma = s1 | s2
                if sigma not in self._simplex:
                    continue
                a2 = w2 & ~s2
                sign = -1 if _inversions(a1, a2) & 1 else 1
                out[sigma] = out.get(sigma, 0) + sign * c1 * c2
        return {k: v for k, v in out.items() if v}

    # -- blocks ---------------------------------------------------------------

    def block(self, omega: int, layer: int) -> Block:
        key = (omega, layer)
        blk = self._blocks.get(key)
        if blk is None:
            blk = self._build_block(omega, layer)
            self._blocks[key] = blk
        return blk

    def _build_block(self, omega: int, layer: int) -> Block:
        expected = self.rank(omega, layer)
        cochains = self.cochains(omega, layer)
        n = len(cochains)
        if expected == 0:
            return Block(omega, layer, cochains, [], [])
        # coboundaries: choose rows T and columns C with D[T, C] invertible
        if layer >= 0:
            _, _, D = self._d_matrix(omega, layer - 1)
        else:
            D = [[] for _ in range(n)]
        T, C = _pivot_rows_cols(D)
        T_set = set(T)
        S = [j for j in range(n) if j not in T_set]
        if layer == 0:
            reps_S = self._component_reps(omega, cochains, S)
        else:
            _, _, N = self._d_matrix(omega, layer)
            N_S = [[row[j] for j in S] for row in N]
            reps_S = integer_kernel(N_S, len(S)) if N_S else [
                [int(a == b) for a in range(len(S))] for b in range(len(S))]
            reps_S = [_normalise(v) for v in reps_S]
        if len(reps_S) != expected:
            raise ArithmeticError(f"block {omega:#x}/{layer}: basis size {len(reps_S)} "
                                  f"differs from Betti number {expected}")
        reps = [{cochains[S[t]]: v for t, v in enumerate(vec) if v} for vec in reps_S]
        # coordinates: invert the basis on a set of independent rows
        piv = _independent_rows([[vec[t] for vec in reps_S] for t in range(len(S))])
        Kp = [[reps_S[b][p] for b in range(expected)] for p in piv]
        Linv = inverse(Kp)
        reducer = [[Fraction(0)] * n for _ in range(expected)]
        for col, p in enumerate(piv):
            for r in range(expected):
                reducer[r][S[p]] += Linv[r][col]
        if T:
            Minv = inverse([[D[t][c] for c in C] for t in T])
            G = [[D[S[p]][c] for c in C] for p in piv]
            H = [[sum(G[i][k] * Minv[k][j] for k in range(len(C))) for j in range(len(T))]
                 for i in range(len(piv))]
            for j, t in enumerate(T):
                for r in range(expected):
                    reducer[r][t] -= sum(Linv[r][i] * H[i][j] for i in range(len(piv)))
        return Block(omega, layer, cochains, reps, reducer)

    def _component_reps(self, omega: int, cochains: List[int], S: List[int]) -> List[List[int]]:
        """Signed indicator cocycles of the components missing the smallest face."""
        P = self.P
        low = omega & -omega
        pos = {c: n for n, c in enumerate(cochains)}
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
        s_index = {j: t for t, j in enumerate(S)}
        reps = []
        for comp in comps:
            if comp & low:
                continue
            first = bits(comp)[0]
            p_first = popcount(omega & ((1 << first) - 1))
            vec = [0] * len(S)
            for v in bits(comp):
                p_v = popcount(omega & ((1 << v) - 1))
                vec[s_index[pos[1 << v]]] = -1 if (p_v - p_first) & 1 else 1
            reps.append(vec)
        return reps

    def reduce(self, omega: int, layer: int, cochain: Dict[int, int]) -> list:
        """Coordinates of a cocycle in the basis of block (omega, layer)."""
        blk = self.block(omega, layer)
        if not blk.reps:
            return []
        idx = {s: n for n, s in enumerate(blk.cochains)}
        out = []
        for row in blk.reducer:
            val = sum((row[idx[s]] * c for s, c in cochain.items()), Fraction(0))
            out.append(self._scalar(val))
        return out

    def _scalar(self, val: Fraction):
        if self.coeff == "z":
            if val.denominator != 1:
                raise ArithmeticError("non-integral coordinate in integral ring table")
            return int(val)
        return val

    # -- products -------------------------------------------------------------

    def block_product(self, k1: Key, k2: Key) -> Optional[list]:
        """Coordinates of e_i * f_j in the target block, as [i][j] lists; None
        when the product vanishes for multidegree or degree reasons."""
        cache_key = (k1, k2)
        if cache_key in self._products:
            return self._products[cache_key]
        (w1, s1), (w2, s2) = k1, k2
        target = (w1 | w2, s1 + s2 + 1)
        result = None
        if not (w1 & w2) and self.rank(*target) and self.rank(*k1) and self.rank(*k2):
            b1, b2 = self.block(*k1), self.block(*k2)
            result = [[self.reduce(*target, self.cochain_product(k1, x, k2, y)) for y in b2.reps]
                      for x in b1.reps]
        self._products[cache_key] = result
        return result

    def element(self, omega: int, layer: int, index: int = 0, coeff=1) -> RingElement:
        if index >= self.rank(omega, layer):
            raise InvalidOmega(f"no basis element {index} in block ({omega:#x}, {layer})")
        return RingElement(self, {(omega, layer, index): coeff})

    def unit(self) -> RingElement:
        return self.element(0, -1)

    def fundamental_class(self) -> RingElement:
        return self.element(self.full, 2)

    def omega_tilde(self, pair) -> RingElement:
        """Generator of H̃^0(P_ω) for a pair of disjoint faces."""
        mask = pair if isinstance(pair, int) else mask_of(pair)
        if popcount(mask) != 2 or self.rank(mask, 0) != 1:
            raise InvalidOmega("omega must be a pair of disjoint faces")
        return self.element(mask, 0)

    def belt_class(self, faces: Iterable[int]) -> RingElement:
        mask = mask_of(faces)
        if self.rank(mask, 1) != 1:
            raise InvalidOmega("not the face set of a belt")
        return self.element(mask, 1)

    def to_dict(self) -> dict:
        basis = []
        for (w, s, i) in self.basis():
            tag = None
            if s == 0 and popcount(w) == 2:
                tag = "omega"
            elif s == 1 and self.rank(w, 1) == 1 and _is_belt_mask(self.P, w):
                tag = f"belt{popcount(w)}"
            elif s == 2:
                tag = "fundamental"
            elif s == -1:
                tag = "unit"
            basis.append({"omega": w, "layer": s, "index": i,
                          "degree": self.degree(w, s), "tag": tag})
        return {"m": self.m, "coeff": self.coeff, "dimension": len(basis), "basis": basis}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def _is_belt_mask(P: SimplePolytope, mask: int) -> bool:
    faces = bits(mask)
    return len(faces) >= 3 and all(popcount(P.nbr[i] & mask) == 2 for i in faces) and \
        not (len(faces) == 3 and P.is_vertex_mask(mask))


def _normalise(vec: List[int]) -> List[int]:
    for v in vec:
        if v:
            return [-x for x in vec] if v < 0 else list(vec)
    return list(vec)


def _pivot_rows_cols(D: List[List[int]]) -> Tuple[List[int], List[int]]:
    """Rows T and columns C with D[T, C] invertible and |T| = rank D.

    Pivots of absolute value 1 are preferred so that D[T, C] is unimodular
    whenever the elimination allows it."""
    A = [[Fraction(v) for v in row] for row in D]
    nrows = len(A)
    ncols = len(A[0]) if A else 0
    free_rows = list(range(nrows))
    used_cols: set = set()
    T, C = [], []
    while True:
        best = None
        for r in free_rows:
            for c in range(ncols):
                if c in used_cols or not A[r][c]:
                    continue
                if abs(A[r][c]) == 1:
                    best = (r, c)
                    break
                if best is None:
                    best = (r, c)
            if best is not None and abs(A[best[0]][best[1]]) == 1:
                break
        if best is None:
            break
        r, c = best
        T.append(r)
        C.append(c)
        free_rows.remove(r)
        used_cols.add(c)
        piv = A[r][c]
        for r2 in free_rows:
            if A[r2][c]:
                f = A[r2][c] / piv
                A[r2] = [a - f * b for a, b in zip(A[r2], A[r])]
    return T, C


def _independent_rows(rows: List[List[int]]) -> List[int]:
    ech = SparseEchelon()
    out = []
    for t, row in enumerate(rows):
        if ech.add(row):
            out.append(t)
    return out


# ---------------------------------------------------------------------------
# public operations


def build_ring(P: SimplePolytope, coeff: str = "z", bound: int = DEFAULT_RING_BOUND) -> RingTable:
    return RingTable(P, coeff, bound)


def multiply(T: RingTable, x: RingElement, y: RingElement) -> RingElement:
    if x.table is not T or y.table is not T:
        raise MixedTables("elements belong to a different ring table")
    out: Dict[BasisId, object] = {}
    for k1, c1 in x.blocks().items():
        for k2, c2 in y.blocks().items():
            prod = T.block_product(k1, k2)
            if prod is None:
                continue
            target = (k1[0] | k2[0], k1[1] + k2[1] + 1)
            for i, a in c1.items():
                for j, b in c2.items():
                    for t, v in enumerate(prod[i][j]):
                        if v:
                            key = target + (t,)
                            out[key] = out.get(key, 0) + a * b * v
    return RingElement(T, out)


def _multiplication_rows(T: RingTable, x: RingElement, include_unit: bool):
    index = {b: n for n, b in enumerate(T.basis())}
    xb = x.blocks()
    for key in T.keys():
        if key[1] == -1 and not include_unit:
            continue
        for j in range(T.rank(*key)):
            row: Dict[int, object] = {}
            for k1, c1 in xb.items():
                prod = T.block_product(k1, key)
                if prod is None:
                    continue
                target = (k1[0] | key[0], k1[1] + key[1] + 1)
                for i, a in c1.items():
                    for t, v in enumerate(prod[i][j]):
                        if v:
                            col = index[target + (t,)]
                            row[col] = row.get(col, 0) + a * v
            yield row


def annihilator_codim(T: RingTable, x: RingElement, include_unit: bool = False) -> int:
    """Rank of y -> x*y over Q.

    By default y ranges over the positive-degree part of the ring, so the unit
    (which never annihilates a nonzero x) is not counted.
    """
    ech = SparseEchelon()
    for row in _multiplication_rows(T, x, include_unit):
        if row:
            ech.add(row)
    return ech.rank


def annihilator_dim(T: RingTable, x: RingElement, include_unit: bool = False) -> int:
    total = T.dimension if include_unit else T.dimension - 1
    return total - annihilator_codim(T, x, include_unit)


# ---------------------------------------------------------------------------
# ring axioms


def _sign(d1: int, d2: int) -> int:
    return -1 if (d1 * d2) & 1 else 1


def check_commutativity(T: RingTable, pairs: Iterable[Tuple[Key, Key]]) -> List[tuple]:
    bad = []
    for k1, k2 in pairs:
        a = T.block_product(k1, k2)
        b = T.block_product(k2, k1)
        if a is None and b is None:
            continue
        if a is None or b is None:
            bad.append((k1, k2))
            continue
        sg = _sign(T.degree(*k1), T.degree(*k2))
        for i in range(len(a)):
            for j in range(len(a[i])):
                if a[i][j] != [sg * v for v in b[j][i]]:
                    bad.append((k1, k2, i, j))
    return bad


def _triple(T: RingTable, k1: Key, k2: Key, k3: Key) -> List[tuple]:
    bad = []
    r1, r2, r3 = T.rank(*k1), T.rank(*k2), T.rank(*k3)
    k12 = (k1[0] | k2[0], k1[1] + k2[1] + 1)
    k23 = (k2[0] | k3[0], k2[1] + k3[1] + 1)
    p12 = T.block_product(k1, k2)
    p23 = T.block_product(k2, k3)
    p12_3 = T.block_product(k12, k3) if p12 is not None else None
    p1_23 = T.block_product(k1, k23) if p23 is not None else None
    n_out = T.rank(k1[0] | k2[0] | k3[0], k1[1] + k2[1] + k3[1] + 2)
    for i in range(r1):
        for j in range(r2):
            for k in range(r3):
                left = [0] * n_out
                right = [0] * n_out
                if p12 is not None and p12_3 is not None:
                    for t, c in enumerate(p12[i][j]):
                        if c:
                            for u, v in enumerate(p12_3[t][k]):
                                left[u] += c * v
                if p23 is not None and p1_23 is not None:
                    for t, c in enumerate(p23[j][k]):
                        if c:
                            for u, v in enumerate(p1_23[i][t]):
                                right[u] += c * v
                if left != right:
                    bad.append((k1, k2, k3, i, j, k))
    return bad


def check_pairing(T: RingTable, key: Key) -> bool:
    """Pairing of block ``key`` with its complementary block into the top
    class is a square integer matrix of determinant ±1."""
    w, s = key
    other = (T.full & ~w, 1 - s)
    n1, n2 = T.rank(*key), T.rank(*other)
    if n1 != n2:
        return False
    if n1 == 0:
        return True
    prod = T.block_product(key, other)
    if prod is None:
        return False
    mat = [[prod[i][j][0] for j in range(n2)] for i in range(n1)]
    return abs(determinant(mat)) == 1


def check_cocycle_products(T: RingTable, k1: Key, k2: Key) -> bool:
    """Products of cocycles are cocycles, and changing a representative by a
    coboundary does not change the reduced product."""
    if k1[0] & k2[0]:
        return True
    target = (k1[0] | k2[0], k1[1] + k2[1] + 1)
    for x in T.block(*k1).reps:
        for y in T.block(*k2).reps:
            z = T.cochain_product(k1, x, k2, y)
            if T.coboundary(target[0], z):
                return False
            if not T.rank(*target) or k1[1] < 0:
                continue
            # shift x by the coboundary of an arbitrary lower cochain
            lower = T.cochains(k1[0], k1[1] - 1)
            if not lower:
                continue
            dx = T.coboundary(k1[0], {lower[0]: 1})
            x2 = dict(x)
            for s, c in dx.items():
                x2[s] = x2.get(s, 0) + c
            z2 = T.cochain_product(k1, x2, k2, y)
            if T.reduce(*target, z) != T.reduce(*target, z2):
                return False
    return True


@dataclass
class AxiomReport:
    commutativity_pairs: int = 0
    associativity_triples: int = 0
    pairings: int = 0
    cocycle_pairs: int = 0
    failures: list = None

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_dict(self) -> dict:
        return {"commutativity_pairs": self.commutativity_pairs,
                "associativity_triples": self.associativity_triples,
                "pairings": self.pairings, "cocycle_pairs": self.cocycle_pairs,
                "failures": [repr(f) for f in self.failures], "ok": self.ok}


def _h0_partitions(T: RingTable) -> Iterator:
    """Ordered triples of H̃^0 blocks partitioning [m]; these are the only
    triples of positive-degree blocks whose products can be nonzero."""
    full = T.full
    for w1 in range(1, full):
        if not T.rank(w1, 0):
            continue
        rest = full & ~w1
        w2 = rest
        while w2:
            w3 = rest & ~w2
            if w3 and T.rank(w2, 0) and T.rank(w3, 0):
                yield (w1, 0), (w2, 0), (w3, 0)
            w2 = (w2 - 1) & rest


def verify_ring_axioms(T: RingTable, exhaustive: bool = True, samples: int = 10000,
                       seed: int = 0) -> AxiomReport:
    """Graded commutativity, associativity, multigrading (cocycle closure)
    and unimodular duality.

    Exhaustive mode walks every pair of blocks with disjoint multidegrees and
    every triple whose iterated product can land in a nonzero group (the
    remaining triples vanish on both sides for degree reasons).  Sampled mode
    draws random triples and pairs with a seeded generator.
    """
    rep = AxiomReport(failures=[])
    keys = T.keys()
    unit = (0, -1)
    if exhaustive:
        pairs = [(a, b) for a in keys for b in keys if not (a[0] & b[0])]
        rep.failures += check_commutativity(T, pairs)
        rep.commutativity_pairs = len(pairs)
        for a, b in pairs:
            rep.cocycle_pairs += 1
            if not check_cocycle_products(T, a, b):
                rep.failures.append(("cocycle", a, b))
        triples = list(_h0_partitions(T))
        for a, b in pairs:
            triples.append((unit, a, b))
            triples.append((a, unit, b))
            triples.append((a, b, unit))
        for k1, k2, k3 in triples:
            rep.failures += _triple(T, k1, k2, k3)
        rep.associativity_triples = len(triples)
        for key in keys:
            if key[1] in (-1, 0):
                rep.pairings += 1
                if not check_pairing(T, key):
                    rep.failures.append(("pairing", key))
        return rep
    rng = random.Random(seed)
    h0 = [k for k in keys if k[1] == 0]
    count = 0
    attempts = 0
    while count < samples and attempts < 200 * samples:
        attempts += 1
        parts = [0, 0, 0]
        for i in range(T.m):
            parts[rng.randrange(3)] |= 1 << i
        ks = [(w, 0) for w in parts]
        if not all(w and T.rank(w, 0) for w in parts):
            continue
        count += 1
        rep.failures += _triple(T, *ks)
        rep.failures += check_commutativity(T, [(ks[0], ks[1])])
        rep.commutativity_pairs += 1
    rep.associativity_triples = count
    for _ in range(min(samples, 200)):
        key = rng.choice(h0)
        rep.pairings += 1
        if not check_pairing(T, key):
            rep.failures.append(("pairing", key))
        other = rng.choice(h0)
        if not (key[0] & other[0]):
            rep.cocycle_pairs += 1
            if not check_cocycle_products(T, key, other):
                rep.failures.append(("cocycle", key, other))
    if not check_pairing(T, unit):
        rep.failures.append(("pairing", unit))
    return rep


# ---------------------------------------------------------------------------
# distinguished subgroups


def n2_masks(T: RingTable) -> List[int]:
    return n2_pairs(T.P)


def h3h3_products(T: RingTable) -> Dict[Tuple[int, int], list]:
    """Nonzero products ω̃·ω̃' (ω < ω') with coordinates in their block."""
    out = {}
    pairs = n2_masks(T)
    for a, b in combinations(pairs, 2):
        if a & b:
            continue
        prod = T.block_product((a, 0), (b, 0))
        if prod is not None and any(prod[0][0]):
            out[(a, b)] = prod[0][0]
    return out


def subgroup_A3(T: RingTable) -> List[int]:
    """The pairs ω whose ω̃ annihilates H^3 (H^3 is multigraded, so A3 is
    spanned by such basis elements)."""
    prods = h3h3_products(T)
    touched = set()
    for a, b in prods:
        touched.add(a)
        touched.add(b)
    return [w for w in n2_masks(T) if w not in touched]


def subgroup_A3_rank_by_kernel(T: RingTable) -> int:
    """rk A3 as the left kernel of the full H^3 x H^3 multiplication matrix."""
    pairs = n2_masks(T)
    cols: Dict[tuple, int] = {}
    rows = []
    for a in pairs:
        row: Dict[int, object] = {}
        for b in pairs:
            prod = T.block_product((a, 0), (b, 0))
            if prod is None:
                continue
            for t, v in enumerate(prod[0][0]):
                if v:
                    key = (b, a | b, t)
                    col = cols.setdefault(key, len(cols))
                    row[col] = v
        rows.append(row)
    if not cols:
        return len(pairs)
    # left kernel of rows = right kernel of the transpose
    transpose = [[0] * len(pairs) for _ in range(len(cols))]
    for r, row in enumerate(rows):
        for c, v in row.items():
            transpose[c][r] = v
    return len(kernel(transpose, len(pairs)))


def rank_H3(T: RingTable) -> int:
    return len(n2_masks(T)) - len(subgroup_A3(T))


def rank_B4(T: RingTable) -> int:
    ech = SparseEchelon()
    index: Dict[tuple, int] = {}
    for (a, b), coords in h3h3_products(T).items():
        row = {index.setdefault((a | b, t), len(index)): v for t, v in enumerate(coords) if v}
        ech.add(row)
    return ech.rank


def _image_rank_h3_h4(T: RingTable, omegas: Sequence[int]) -> int:
    allowed = set(omegas)
    total = 0
    for tau in _subsets_of_size(T.m, 5):
        if not T.rank(tau, 1):
            continue
        ech = SparseEchelon()
        for w in n2_masks(T):
            if w & ~tau or w not in allowed:
                continue
            rest = tau & ~w
            prod = T.block_product((w, 0), (rest, 0))
            if prod is None:
                continue
            for coords in prod[0]:
                ech.add(coords)
        total += ech.rank
    return total


def _subsets_of_size(m: int, k: int) -> Iterator[int]:
    for c in combinations(range(m), k):
        yield mask_of(c)


def rank_I7(T: RingTable) -> int:
    """Rank of the image of H^3 ⊗ H^4 in H^7."""
    return _image_rank_h3_h4(T, n2_masks(T))


def rank_A7(T: RingTable) -> int:
    """Rank of the image of A3 ⊗ H^4 in H^7."""
    return _image_rank_h3_h4(T, subgroup_A3(T))


def rank_boldI7(T: RingTable) -> int:
    return rank_I7(T) - rank_A7(T)


def rank_B5(T: RingTable) -> int:
    """Rank of the span of the 5-belt classes."""
    from .belts import enumerate_belts

    ech = SparseEchelon()
    index: Dict[tuple, int] = {}
    for belt in enumerate_belts(T.P, 5):
        x = T.belt_class(belt.faces)
        ech.add({index.setdefault(k, len(index)): v for k, v in x.coeffs.items()})
    return ech.rank


@dataclass(frozen=True)
class RankReport:
    m: int
    A3: int
    B4: int
    B5: int
    H3: int
    I7: int
    A7: int
    boldI7: int

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def rank_report(T: RingTable) -> RankReport:
    a3 = len(subgroup_A3(T))
    i7 = rank_I7(T)
    a7 = rank_A7(T)
    return RankReport(T.m, a3, rank_B4(T), rank_B5(T), len(n2_masks(T)) - a3, i7, a7, i7 - a7)


@dataclass(frozen=True)
class CriterionResult:
    holds: bool
    quotient_form: bool
    ranks: RankReport

    def __bool__(self) -> bool:
        return self.holds


def _require_flag(T: RingTable) -> None:
    from .belts import is_flag

    if not is_flag(T.P):
        raise NotFlag("criterion is defined for flag polytopes")


def criterion_bapog_detail(T: RingTable) -> CriterionResult:
    _require_flag(T)
    r = rank_report(T)
    base = 2 * r.B4 == r.H3
    full = base and r.I7 == r.B5 + (T.m - 5) * r.B4
    quotient = base and r.boldI7 == (T.m - 5) * r.B4
    return CriterionResult(full, quotient, r)


def criterion_bapog(T: RingTable) -> bool:
    return criterion_bapog_detail(T).holds


def criterion_ideal_detail(T: RingTable) -> CriterionResult:
    _require_flag(T)
    r = rank_report(T)
    m = T.m
    base = 2 * r.B4 == r.H3 == m - 2
    full = base and r.I7 == r.B5 + (m - 5) * (m - 2) // 2 and (m - 5) * (m - 2) % 2 == 0
    quotient = base and 2 * r.boldI7 == (m - 5) * (m - 2)
    return CriterionResult(full, quotient, r)


def criterion_ideal_bapog(T: RingTable) -> bool:
    return criterion_ideal_detail(T).holds


# ---------------------------------------------------------------------------
# divisibility


def _check_pair(T: RingTable, omega) -> int:
    mask = omega if isinstance(omega, int) else mask_of(omega)
    if popcount(mask) != 2 or mask & ~T.full or T.P.adjacent(*bits(mask)):
        raise InvalidOmega("omega must be a pair of disjoint faces")
    return mask


def is_divisible_by(T: RingTable, x: RingElement, omega) -> bool:
    """Is x = α·z for α = ω̃ (or a combination of ω̃'s), with z of positive
    degree?  Components are solved block by block over the integers (over Q
    for rational tables)."""
    if isinstance(omega, RingElement):
        alpha = omega
    else:
        alpha = T.omega_tilde(_check_pair(T, omega))
    return _divisible(T, x, alpha)


def _divisible(T: RingTable, x: RingElement, alpha: RingElement) -> bool:
    if x.table is not T or alpha.table is not T:
        raise MixedTables("elements belong to a different ring table")
    if not x:
        return True
    a_blocks = alpha.blocks()
    if any(k[1] != 0 for k in a_blocks):
        raise InvalidOmega("divisor must be a combination of H̃^0 classes")
    # unknowns: coordinates of z in every block that the divisor can reach x from
    targets = x.blocks()
    unknowns: List[BasisId] = []
    for (w, s) in targets:
        if s < 1:
            return False
        for (aw, _) in a_blocks:
            if aw & ~w:
                continue
            rest = (w & ~aw, s - 1)
            if rest[0] and T.rank(*rest):
                unknowns += [rest + (i,) for i in range(T.rank(*rest))]
    unknowns = sorted(set(unknowns))
    images = [multiply(T, alpha, RingElement(T, {u: 1})).coeffs for u in unknowns]
    rows = sorted(set(x.coeffs) | {k for img in images for k in img})
    columns = [[img.get(r, 0) for r in rows] for img in images]
    target = [x.coeffs.get(r, 0) for r in rows]
    if T.coeff == "q" or any(isinstance(v, Fraction) and v.denominator != 1 for v in target):
        return _rational_solvable(columns, target)
    return integer_solve(columns, target) is not None


def _rational_solvable(columns: List[List], target: List) -> bool:
    ech = SparseEchelon()
    for c in columns:
        ech.add(c)
    return ech.contains(target)


def divisible_by_whole_coset(T: RingTable, x: RingElement, omega) -> bool:
    """Divisibility by ω̃ and by ω̃ + a for every basis element a of A3."""
    mask = _check_pair(T, omega)
    base = T.omega_tilde(mask)
    if not _divisible(T, x, base):
        return False
    for a in subgroup_A3(T):
        if a == mask:
            continue
        if not _divisible(T, x, base + T.omega_tilde(a)):
            return False
    return True


# ---------------------------------------------------------------------------
# adjacency from ring data


def _require_apog(P: SimplePolytope) -> None:
    from .belts import is_almost_pogorelov

    if not is_almost_pogorelov(P) or P.m <= 7:
        raise OutOfFamily("adjacency tests need an almost Pogorelov polytope "
                          "other than the cube and the pentagonal prism")


def quad_pair_divisors(T: RingTable, x: RingElement) -> List[int]:
    """Pairs of disjoint quadrangles {p, q} with x divisible by the class of {p, q}."""
    quads = T.P.quadrangles
    out = []
    for p, q in combinations(quads, 2):
        if T.P.adjacent(p, q):
            continue
        if is_divisible_by(T, x, (p, q)):
            out.append(mask_of((p, q)))
    return out


@dataclass(frozen=True)
class AdjacencyVerdict:
    kind: str          # "belt-belt" or "quad-belt"
    faces: Tuple[int, int]
    common_divisors: int
    ring_adjacent: bool
    adjacent: bool

    @property
    def agrees(self) -> bool:
        return self.ring_adjacent == self.adjacent


def surrounded_faces(P: SimplePolytope) -> Dict[int, Tuple[int, ...]]:
    """Faces surrounded by a quadrangle-alternating belt, with that belt."""
    from .belts import quad_alternating_belts

    out = {}
    for belt in quad_alternating_belts(P):
        if len(belt.trivial_sides) >= 1 and belt.k >= 6:
            for f in belt.trivial_sides:
                if tuple(sorted(P.face_cycles[f])) == tuple(sorted(belt.faces)):
                    out[f] = belt.faces
    return out


def ring_adjacency_test(T: RingTable, quad_tests: bool = True) -> List[AdjacencyVerdict]:
    """Decide adjacency of surrounded faces (and of quadrangles with them)
    from divisibility in the ring; each verdict carries the true answer."""
    P = T.P
    _require_apog(P)
    surrounded = surrounded_faces(P)
    classes = {f: T.belt_class(b) for f, b in surrounded.items()}
    divisors = {f: set(quad_pair_divisors(T, x)) for f, x in classes.items()}
    out = []
    for i, j in combinations(sorted(surrounded), 2):
        n = len(divisors[i] & divisors[j])
        out.append(AdjacencyVerdict("belt-belt", (i, j), n, n == 1, P.adjacent(i, j)))
    if quad_tests:
        from .belts import surrounding_belt

        for q in P.quadrangles:
            ring4 = surrounding_belt(P, q)
            if ring4 is None:
                continue
            f = ring4.faces
            opposite = [(f[0], f[2]), (f[1], f[3])]
            for j in sorted(surrounded):
                if j == q:
                    continue
                hits = sum(1 for pq in opposite
                           if divisible_by_whole_coset(T, classes[j], pq))
                out.append(AdjacencyVerdict("quad-belt", (q, j), hits, hits > 0,
                                            P.adjacent(q, j)))
    return out


def self_common_divisors(T: RingTable, face: int) -> int:
    """Quadrangle-pair divisors of the class of the belt around ``face``."""
    surrounded = surrounded_faces(T.P)
    if face not in surrounded:
        raise InvalidOmega(f"face {face} is not surrounded by an alternating belt")
    return len(quad_pair_divisors(T, T.belt_class(surrounded[face])))


# ---------------------------------------------------------------------------
# annihilators over N2


def annihilator_codims(T: RingTable) -> Dict[int, int]:
    return {w: annihilator_codim(T, T.omega_tilde(w)) for w in n2_masks(T)}

"""Exact linear algebra over Q and Z on small sparse/dense matrices.

Vectors are either dense lists or sparse dicts ``{index: value}``; values are
``int`` or ``fractions.Fraction``.  Nothing here uses floating point.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence

SparseVec = Dict[int, Fraction]


class SparseEchelon:
    """Incremental row echelon form over Q.

    Rows are added one at a time; ``add`` reports whether the row was
    independent of the rows already present.  Pivots are taken at the
    smallest index of the reduced row, which makes results independent of
    anything but the insertion order.
    """

    def __init__(self) -> None:
        self.pivots: Dict[int, SparseVec] = {}

    def __len__(self) -> int:
        return len(self.pivots)

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def reduce(self, row) -> SparseVec:
        # stored rows are fully reduced against each other, so one pass over
        # the pivot columns present in ``row`` suffices
        vec = {k: Fraction(v) for k, v in _items(row) if v}
        for col in [k for k in vec if k in self.pivots]:
            factor = vec.get(col)
            if not factor:
                continue
            for k, v in self.pivots[col].items():
                nv = vec.get(k, 0) - factor * v
                if nv:
                    vec[k] = nv
                else:
                    vec.pop(k, None)
        return vec

    def add(self, row) -> bool:
        vec = self.reduce(row)
        if not vec:
            return False
        col = min(vec)
        lead = vec[col]
        vec = {k: v / lead for k, v in vec.items()}
        # keep every stored pivot row free of the new pivot column
        for pcol, prow in self.pivots.items():
            f = prow.get(col)
            if f:
                for k, v in vec.items():
                    nv = prow.get(k, 0) - f * v
                    if nv:
                        prow[k] = nv
                    else:
                        prow.pop(k, None)
        self.pivots[col] = vec
        return True

    def contains(self, row) -> bool:
        return not self.reduce(row)


def _items(row):
    if isinstance(row, dict):
        return row.items()
    return enumerate(row)


def rank(rows: Iterable) -> int:
    ech = SparseEchelon()
    for r in rows:
        ech.add(r)
    return ech.rank


def kernel(rows: Sequence, ncols: int) -> List[List[Fraction]]:
    """Basis of the right kernel {x : A x = 0} over Q (dense output)."""
    mat = [[Fraction(v) for v in _dense(r, ncols)] for r in rows]
    pivcols = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(mat)) if mat[i][c]), None)
        if p is None:
            continue
        mat[r], mat[p] = mat[p], mat[r]
        lead = mat[r][c]
        mat[r] = [v / lead for v in mat[r]]
        for i in range(len(mat)):
            if i != r and mat[i][c]:
                f = mat[i][c]
                mat[i] = [a - f * b for a, b in zip(mat[i], mat[r])]
        pivcols.append(c)
        r += 1
        if r == len(mat):
            break
    free = [c for c in range(ncols) if c not in pivcols]
    basis = []
    for fc in free:
        v = [Fraction(0)] * ncols
        v[fc] = Fraction(1)
        for i, pc in enumerate(pivcols):
            v[pc] = -mat[i][fc]
        basis.append(v)
    return basis


def _dense(row, ncols: int) -> List:
    if isinstance(row, dict):
        out = [0] * ncols
        for k, v in row.items():
            out[k] = v
        return out
    return list(row)


def determinant(matrix: Sequence[Sequence]) -> Fraction:
    n = len(matrix)
    mat = [[Fraction(v) for v in row] for row in matrix]
    det = Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if mat[i][c]), None)
        if p is None:
            return Fraction(0)
        if p != c:
            mat[c], mat[p] = mat[p], mat[c]
            det = -det
        lead = mat[c][c]
        det *= lead
        for i in range(c + 1, n):
            if mat[i][c]:
                f = mat[i][c] / lead
                mat[i] = [a - f * b for a, b in zip(mat[i], mat[c])]
    return det


def inverse(matrix: Sequence[Sequence]) -> List[List[Fraction]]:
    n = len(matrix)
    aug = [[Fraction(v) for v in row] + [Fraction(int(i == j)) for j in range(n)]
           for i, row in enumerate(matrix)]
    for c in range(n):
        p = next((i for i in range(c, n) if aug[i][c]), None)
        if p is None:
            raise ZeroDivisionError("singular matrix")
        aug[c], aug[p] = aug[p], aug[c]
        lead = aug[c][c]
        aug[c] = [v / lead for v in aug[c]]
        for i in range(n):
            if i != c and aug[i][c]:
                f = aug[i][c]
                aug[i] = [a - f * b for a, b in zip(aug[i], aug[c])]
    return [row[n:] for row in aug]


# ---------------------------------------------------------------------------
# integer lattices


def column_echelon(matrix: Sequence[Sequence[int]], ncols: int):
    """Unimodular column reduction of an integer matrix.

    Returns ``(E, U, pivots)`` with ``E = A U`` lower-echelon: ``pivots`` is a
    list of ``(row, col)`` pairs, column ``col`` of E is zero above ``row``,
    and all columns past the last pivot column are zero.
    """
    nrows = len(matrix)
    cols = [[int(matrix[r][c]) for r in range(nrows)] for c in range(ncols)]
    ucols = [[int(i == c) for i in range(ncols)] for c in range(ncols)]
    pivots = []
    p = 0
    for r in range(nrows):
        if p == ncols:
            break
        while True:
            nz = [c for c in range(p, ncols) if cols[c][r]]
            if not nz:
                break
            best = min(nz, key=lambda c: abs(cols[c][r]))
            if len(nz) == 1:
                break
            for c in nz:
                if c == best:
                    continue
                q = cols[c][r] // cols[best][r]
                if q:
                    cols[c] = [a - q * b for a, b in zip(cols[c], cols[best])]
                    ucols[c] = [a - q * b for a, b in zip(ucols[c], ucols[best])]
        nz = [c for c in range(p, ncols) if cols[c][r]]
        if not nz:
            continue
        c = nz[0]
        cols[p], cols[c] = cols[c], cols[p]
        ucols[p], ucols[c] = ucols[c], ucols[p]
        if cols[p][r] < 0:
            cols[p] = [-a for a in cols[p]]
            ucols[p] = [-a for a in ucols[p]]
        pivots.append((r, p))
        p += 1
    return cols, ucols, pivots


def integer_kernel(matrix: Sequence[Sequence[int]], ncols: int) -> List[List[int]]:
    """A Z-basis of {x in Z^n : A x = 0}."""
    if not matrix:
        return [[int(i == j) for i in range(ncols)] for j in range(ncols)]
    cols, ucols, pivots = column_echelon(matrix, ncols)
    return [ucols[c] for c in range(len(pivots), ncols)]


def integer_solve(columns: Sequence[Sequence[int]], target: Sequence) -> Optional[List[int]]:
    """Integer coefficients c with sum c_j columns[j] == target, or None."""
    n = len(target)
    if any(Fraction(t).denominator != 1 for t in target):
        return None
    tgt = [int(t) for t in target]
    if not columns:
        return [] if not any(tgt) else None
    ncols = len(columns)
    matrix = [[columns[c][r] for c in range(ncols)] for r in range(n)]
    cols, ucols, pivots = column_echelon(matrix, ncols)
    residual = list(tgt)
    coeffs = [0] * ncols
    for r, c in pivots:
        if residual[r] % cols[c][r]:
            return None
        q = residual[r] // cols[c][r]
        if q:
            residual = [a - q * b for a, b in zip(residual, cols[c])]
            coeffs[c] = q
    if any(residual):
        return None
    # translate echelon coefficients back through U
    sol = [0] * ncols
    for c, q in enumerate(coeffs):
        if q:
            for i in range(ncols):
                sol[i] += q * ucols[c][i]
    return sol


def elementary_divisors(matrix: Sequence[Sequence[int]]) -> List[int]:
    """Nonzero diagonal entries of the Smith normal form."""
    rows = [[int(v) for v in row] for row in matrix]
    rows = [r for r in rows if any(r)]
    divisors = []
    # unit pivots first: clear the pivot column with row operations, after
    # which the pivot row and column can be dropped
    while True:
        hit = next(((i, j) for i, r in enumerate(rows) for j, v in enumerate(r)
                    if v in (1, -1)), None)
        if hit is None:
            break
        i, j = hit
        prow = rows.pop(i)
        s = prow[j]
        nxt = []
        for r in rows:
            f = r[j] * s
            if f:
                r = [x - f * y for x, y in zip(r, prow)]
            r = r[:j] + r[j + 1:]
            if any(r):
                nxt.append(r)
        rows = nxt
        divisors.append(1)
    return divisors + _smith_diagonal(rows)


def _smith_diagonal(a: List[List[int]]) -> List[int]:
    if not a or not a[0]:
        return []
    nr, nc = len(a), len(a[0])
    divisors = []
    t = 0
    while t < min(nr, nc):
        nz = [(abs(a[i][j]), i, j) for i in range(t, nr) for j in range(t, nc) if a[i][j]]
        if not nz:
            break
        _, i, j = min(nz)
        a[t], a[i] = a[i], a[t]
        for row in a:
            row[t], row[j] = row[j], row[t]
        while True:
            changed = False
            for i in range(t + 1, nr):
                if a[i][t]:
                    q = a[i][t] // a[t][t]
                    a[i] = [x - q * y for x, y in zip(a[i], a[t])]
                    if a[i][t]:
                        a[t], a[i] = a[i], a[t]
                        changed = True
            for j in range(t + 1, nc):
                if a[t][j]:
                    q = a[t][j] // a[t][t]
                    for row in a:
                        row[j] -= q * row[t]
                    if a[t][j]:
                        for row in a:
                            row[t], row[j] = row[j], row[t]
                        changed = True
            if changed:
                continue
            bad = next(((i, j) for i in range(t + 1, nr) for j in range(t + 1, nc)
                        if a[i][j] % a[t][t]), None)
            if bad is None:
                break
            a[t] = [x + y for x, y in zip(a[t], a[bad[0]])]
        divisors.append(abs(a[t][t]))
        t += 1
    return divisors

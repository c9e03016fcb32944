# src/backend/exact/linalg.py
# Exact Gauss-Jordan elimination over the rationals. Pivots are the first
# nonzero entry of a column; exact arithmetic needs no magnitude pivoting.

from __future__ import annotations

from fractions import Fraction
from typing import List, Sequence, Tuple

from src.backend.exact.matrix import MatrixR
from src.shared.errors import SingularMatrix, SizeMismatch


Vector = Tuple[Fraction, ...]


def rref(rows: Sequence[Sequence[Fraction]], n_cols: int | None = None) -> Tuple[List[List[Fraction]], List[int]]:
    """
    Reduced row echelon form of a rational matrix given as rows.

    Returns the reduced rows (zero rows at the bottom) and the pivot columns.
    When `n_cols` is given only the first `n_cols` columns are pivoted on;
    trailing columns (an augmented right-hand side) are carried along.
    """
    m = [list(r) for r in rows]
    if not m:
        return m, []
    width = len(m[0])
    limit = width if n_cols is None else n_cols
    pivots: List[int] = []
    r = 0
    for c in range(limit):
        if r == len(m):
            break
        p = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        pivot = m[r][c]
        if pivot != 1:
            inv = 1 / Fraction(pivot)
            m[r] = [v * inv for v in m[r]]
        pivot_row = m[r]
        for i in range(len(m)):
            if i == r:
                continue
            factor = m[i][c]
            if factor != 0:
                m[i] = [a - factor * b for a, b in zip(m[i], pivot_row)]
        pivots.append(c)
        r += 1
    return m, pivots


def rank(m: MatrixR) -> int:
    _, pivots = rref(m.rows)
    return len(pivots)


def nullspace_of_rows(rows: Sequence[Sequence[Fraction]], n_cols: int) -> List[Vector]:
    """
    Basis of {v : rows . v = 0} for a system with `n_cols` unknowns.

    An empty system yields the standard basis. Each basis vector has a 1 in
    its free coordinate, so the output is deterministic.
    """
    zero = Fraction(0)
    one = Fraction(1)
    if not rows:
        return [tuple(one if i == j else zero for i in range(n_cols)) for j in range(n_cols)]
    reduced, pivots = rref(rows)
    pivot_set = set(pivots)
    basis: List[Vector] = []
    for free in range(n_cols):
        if free in pivot_set:
            continue
        v = [zero] * n_cols
        v[free] = one
        for r, c in enumerate(pivots):
            v[c] = -reduced[r][free]
        basis.append(tuple(v))
    return basis


def nullspace_basis(m: MatrixR) -> List[Vector]:
    """Exact basis of the right null space of m; dimension = n_cols - rank(m)."""
    basis = nullspace_of_rows(m.rows, m.n_cols)
    for v in basis:
        for row in m.rows:
            if sum(a * b for a, b in zip(row, v)) != 0:
                raise ArithmeticError("null space vector failed the exactness check")
    return basis


def determinant(m: MatrixR) -> Fraction:
    if not m.is_square():
        raise SizeMismatch(f"determinant of non-square {m.shape}")
    a = [list(r) for r in m.rows]
    n = len(a)
    det = Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if a[i][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            a[c], a[p] = a[p], a[c]
            det = -det
        pivot = a[c][c]
        det *= pivot
        for i in range(c + 1, n):
            factor = a[i][c] / pivot
            if factor != 0:
                a[i] = [x - factor * y for x, y in zip(a[i], a[c])]
    return det


def mat_inverse(m: MatrixR) -> MatrixR:
    """
    Exact inverse. 1x1 and 2x2 blocks use the adjugate formula; larger
    matrices go through Gauss-Jordan on [m | I].
    """
    if not m.is_square():
        raise SizeMismatch(f"cannot invert non-square {m.shape}")
    n = m.n_rows
    if n == 1:
        a = m.rows[0][0]
        if a == 0:
            raise SingularMatrix("1x1 matrix is zero")
        return MatrixR(((1 / a,),))
    if n == 2:
        (a, b), (c, d) = m.rows
        det = a * d - b * c
        if det == 0:
            raise SingularMatrix(f"determinant is zero: {m!r}")
        inv = 1 / Fraction(det)
        return MatrixR(((d * inv, -b * inv), (-c * inv, a * inv)))
    return linsolve(m, MatrixR.identity(n))


def linsolve(a: MatrixR, b: MatrixR) -> MatrixR:
    """Exact x with a.x = b; `a` must be square and invertible."""
    if not a.is_square():
        raise SizeMismatch(f"coefficient matrix {a.shape} is not square")
    if a.n_rows != b.n_rows:
        raise SizeMismatch(f"right-hand side has {b.n_rows} rows, expected {a.n_rows}")
    n = a.n_rows
    augmented = [list(ra) + list(rb) for ra, rb in zip(a.rows, b.rows)]
    reduced, pivots = rref(augmented, n_cols=n)
    if len(pivots) < n:
        raise SingularMatrix(f"coefficient matrix has rank {len(pivots)} < {n}")
    return MatrixR(tuple(tuple(row[n:]) for row in reduced[:n]))

# src/backend/exact/matpoly.py

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import perm
from typing import Iterable, List, Sequence, Tuple

from src.backend.exact.matrix import MatrixR
from src.backend.exact.rational import RationalLike, as_rational
from src.shared.errors import SizeMismatch


@dataclass(frozen=True)
class MatPoly:
    """
    Polynomial in x with N x N rational matrix coefficients; coeffs[k] is the
    coefficient of x^k. Trailing zero coefficients are stripped on
    construction, so the zero polynomial has no coefficients and degree -1.

    Multiplication is noncommutative: (p*q)_k = sum_{i+j=k} p_i q_j.
    """

    size: int
    coeffs: Tuple[MatrixR, ...]

    def __post_init__(self) -> None:
        for c in self.coeffs:
            if c.shape != (self.size, self.size):
                raise SizeMismatch(f"coefficient of shape {c.shape} in a polynomial of block size {self.size}")
        end = len(self.coeffs)
        while end > 0 and self.coeffs[end - 1].is_zero():
            end -= 1
        if end != len(self.coeffs):
            object.__setattr__(self, "coeffs", self.coeffs[:end])

    # =========================
    # Constructors
    # =========================

    @classmethod
    def from_coeffs(cls, coeffs: Sequence[MatrixR]) -> "MatPoly":
        if not coeffs:
            raise SizeMismatch("use MatPoly.zero(size) for the zero polynomial")
        return cls(coeffs[0].n_rows, tuple(coeffs))

    @classmethod
    def zero(cls, size: int) -> "MatPoly":
        return cls(size, ())

    @classmethod
    def constant(cls, m: MatrixR) -> "MatPoly":
        return cls(m.n_rows, (m,))

    @classmethod
    def monomial(cls, m: MatrixR, degree: int) -> "MatPoly":
        zero = MatrixR.zero(m.n_rows)
        return cls(m.n_rows, (zero,) * degree + (m,))

    @classmethod
    def x(cls, size: int) -> "MatPoly":
        """The polynomial x*I."""
        return cls.monomial(MatrixR.identity(size), 1)

    @classmethod
    def scalar_poly(cls, size: int, coeffs: Sequence[RationalLike], times: MatrixR | None = None) -> "MatPoly":
        """sum_k coeffs[k] x^k, multiplied by `times` (identity by default)."""
        base = MatrixR.identity(size) if times is None else times
        return cls(size, tuple(base.scale(as_rational(c)) for c in coeffs))

    # =========================
    # Inspection
    # =========================

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def coefficient(self, k: int) -> MatrixR:
        if 0 <= k < len(self.coeffs):
            return self.coeffs[k]
        return MatrixR.zero(self.size)

    def leading(self) -> MatrixR:
        return self.coefficient(self.degree)

    def is_monic(self) -> bool:
        return not self.is_zero() and self.leading() == MatrixR.identity(self.size)

    def first_nonzero(self) -> Tuple[int, int, int] | None:
        """(degree, row, col) of the first nonzero entry, scanning by degree."""
        for k, c in enumerate(self.coeffs):
            pos = c.first_nonzero()
            if pos is not None:
                return k, pos[0], pos[1]
        return None

    def evaluate(self, x: RationalLike) -> MatrixR:
        value = as_rational(x)
        acc = MatrixR.zero(self.size)
        for c in reversed(self.coeffs):
            acc = acc.scale(value) + c
        return acc

    # =========================
    # Arithmetic
    # =========================

    def _check_size(self, other: "MatPoly") -> None:
        if self.size != other.size:
            raise SizeMismatch(f"block size {self.size} does not match {other.size}")

    def __add__(self, other: object) -> "MatPoly":
        if not isinstance(other, MatPoly):
            return NotImplemented
        self._check_size(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return MatPoly(self.size, tuple(self.coefficient(k) + other.coefficient(k) for k in range(n)))

    def __sub__(self, other: object) -> "MatPoly":
        if not isinstance(other, MatPoly):
            return NotImplemented
        self._check_size(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return MatPoly(self.size, tuple(self.coefficient(k) - other.coefficient(k) for k in range(n)))

    def __neg__(self) -> "MatPoly":
        return MatPoly(self.size, tuple(-c for c in self.coeffs))

    def scale(self, value: RationalLike) -> "MatPoly":
        c = as_rational(value)
        return MatPoly(self.size, tuple(m.scale(c) for m in self.coeffs))

    def left_mul(self, m: MatrixR) -> "MatPoly":
        """m * p, constant matrix on the left."""
        return MatPoly(self.size, tuple(m.matmul(c) for c in self.coeffs))

    def right_mul(self, m: MatrixR) -> "MatPoly":
        """p * m, constant matrix on the right."""
        return MatPoly(self.size, tuple(c.matmul(m) for c in self.coeffs))

    def shift(self, k: int = 1) -> "MatPoly":
        """x^k * p."""
        if self.is_zero():
            return self
        return MatPoly(self.size, (MatrixR.zero(self.size),) * k + self.coeffs)

    def __mul__(self, other: object) -> "MatPoly":
        if isinstance(other, MatPoly):
            return matpoly_mul(self, other)
        if isinstance(other, MatrixR):
            return self.right_mul(other)
        if isinstance(other, (Fraction, int)) and not isinstance(other, bool):
            return self.scale(other)
        return NotImplemented

    def __rmul__(self, other: object) -> "MatPoly":
        if isinstance(other, MatrixR):
            return self.left_mul(other)
        if isinstance(other, (Fraction, int)) and not isinstance(other, bool):
            return self.scale(other)
        return NotImplemented

    def derivative(self, order: int = 1) -> "MatPoly":
        return matpoly_derivative(self, order)

    def to_json(self) -> List[List[List[str]]]:
        return [c.to_json() for c in self.coeffs]


def matpoly_mul(p: MatPoly, q: MatPoly) -> MatPoly:
    """Exact noncommutative product."""
    if p.size != q.size:
        raise SizeMismatch(f"block size {p.size} does not match {q.size}")
    if p.is_zero() or q.is_zero():
        return MatPoly.zero(p.size)
    out = [MatrixR.zero(p.size) for _ in range(p.degree + q.degree + 1)]
    for i, a in enumerate(p.coeffs):
        if a.is_zero():
            continue
        for j, b in enumerate(q.coeffs):
            out[i + j] = out[i + j] + a.matmul(b)
    return MatPoly(p.size, tuple(out))


def matpoly_derivative(p: MatPoly, order: int) -> MatPoly:
    """order-th derivative in x; the degree drops by `order`."""
    if order < 0:
        raise ValueError(f"derivative order must be nonnegative, got {order}")
    if order == 0:
        return p
    return MatPoly(p.size, tuple(c.scale(perm(k, order)) for k, c in enumerate(p.coeffs) if k >= order))


def matpoly_sum(terms: Iterable[MatPoly], size: int) -> MatPoly:
    acc = MatPoly.zero(size)
    for t in terms:
        acc = acc + t
    return acc

# src/backend/bispec/diffop.py

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from src.backend.blockop.tridiag import BlockTridiag
from src.backend.exact.matpoly import MatPoly, matpoly_derivative, matpoly_sum
from src.backend.exact.matrix import MatrixR
from src.backend.exact.polyn import PolyN
from src.backend.mop.polys import polys_from_recurrence
from src.shared.errors import DegreeExceeded, InsufficientLevels, InvalidCount, NotBispectral, SizeMismatch
from src.shared.schemas import Report, ReportDetail

_logger = logging.getLogger(__name__)

PolyGrid = Tuple[Tuple[PolyN, ...], ...]


@dataclass(frozen=True)
class RightDiffOp:
    """
    D = sum_i d^i F_i(x), acting on the right: P D = sum_i P^(i)(x) F_i(x).

    coeffs[i] is F_i and must satisfy deg F_i <= i.
    """

    block_size: int
    coeffs: Tuple[MatPoly, ...]

    def __post_init__(self) -> None:
        if not self.coeffs:
            raise SizeMismatch("a differential operator needs at least F_0")
        for i, f in enumerate(self.coeffs):
            if f.size != self.block_size:
                raise SizeMismatch(f"F_{i} has block size {f.size}, expected {self.block_size}")
            if f.degree > i:
                raise DegreeExceeded(f"deg F_{i} = {f.degree} exceeds {i}; P_n D would not keep degree n")

    @classmethod
    def from_coeffs(cls, coeffs: Sequence[MatPoly]) -> "RightDiffOp":
        if not coeffs:
            raise SizeMismatch("a differential operator needs at least F_0")
        return cls(coeffs[0].size, tuple(coeffs))

    @classmethod
    def constant(cls, f0: MatrixR) -> "RightDiffOp":
        return cls(f0.n_rows, (MatPoly.constant(f0),))

    @property
    def order(self) -> int:
        """Largest i with F_i != 0 (0 for the zero operator)."""
        for i in range(len(self.coeffs) - 1, -1, -1):
            if not self.coeffs[i].is_zero():
                return i
        return 0

    def coefficient(self, i: int) -> MatPoly:
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return MatPoly.zero(self.block_size)

    def __add__(self, other: object) -> "RightDiffOp":
        if not isinstance(other, RightDiffOp):
            return NotImplemented
        if other.block_size != self.block_size:
            raise SizeMismatch(f"block size {self.block_size} does not match {other.block_size}")
        n = max(len(self.coeffs), len(other.coeffs))
        return RightDiffOp(self.block_size, tuple(self.coefficient(i) + other.coefficient(i) for i in range(n)))

    def scale(self, value: Fraction | int) -> "RightDiffOp":
        return RightDiffOp(self.block_size, tuple(f.scale(value) for f in self.coeffs))


@dataclass(frozen=True)
class EigenSeq:
    """
    Lambda_n, either as an explicit list or as an N x N grid of polynomials
    in n. When both are present they must agree on the explicit range.
    """

    block_size: int
    explicit: Optional[Tuple[MatrixR, ...]] = None
    poly_in_n: Optional[PolyGrid] = None

    def __post_init__(self) -> None:
        if self.explicit is None and self.poly_in_n is None:
            raise SizeMismatch("an eigenvalue sequence needs an explicit list or a polynomial grid")
        if self.poly_in_n is not None:
            if len(self.poly_in_n) != self.block_size or any(len(r) != self.block_size for r in self.poly_in_n):
                raise SizeMismatch(f"polynomial grid is not {self.block_size} x {self.block_size}")
        if self.explicit is not None:
            for n, lam in enumerate(self.explicit):
                if lam.shape != (self.block_size, self.block_size):
                    raise SizeMismatch(f"Lambda_{n} has shape {lam.shape}")
                if self.poly_in_n is not None and lam != self._evaluate(n):
                    raise ValueError(f"explicit Lambda_{n} disagrees with the polynomial grid")

    @classmethod
    def from_list(cls, values: Sequence[MatrixR]) -> "EigenSeq":
        if not values:
            raise SizeMismatch("empty eigenvalue list")
        return cls(values[0].n_rows, explicit=tuple(values))

    @classmethod
    def from_grid(cls, grid: Sequence[Sequence[PolyN]]) -> "EigenSeq":
        return cls(len(grid), poly_in_n=tuple(tuple(row) for row in grid))

    @property
    def available(self) -> Optional[int]:
        """Number of Lambda_n available, None when unbounded."""
        if self.poly_in_n is not None:
            return None
        return len(self.explicit)  # type: ignore[arg-type]

    def _evaluate(self, n: int) -> MatrixR:
        return MatrixR(tuple(tuple(p.evaluate(n) for p in row) for row in self.poly_in_n))  # type: ignore[union-attr]

    def at(self, n: int) -> MatrixR:
        if self.poly_in_n is not None:
            return self._evaluate(n)
        if n >= len(self.explicit):  # type: ignore[arg-type]
            raise InsufficientLevels(f"Lambda_{n} requested, only {len(self.explicit)} given")  # type: ignore[arg-type]
        return self.explicit[n]  # type: ignore[index]

    def take(self, count: int) -> "EigenSeq":
        return EigenSeq.from_list([self.at(n) for n in range(count)])

    def scale(self, value: Fraction | int) -> "EigenSeq":
        if self.poly_in_n is not None:
            return EigenSeq.from_grid([[p * Fraction(value) for p in row] for row in self.poly_in_n])
        return EigenSeq.from_list([m.scale(value) for m in self.explicit])  # type: ignore[union-attr]


# =========================
# Operator action
# =========================

def apply_right_op(p: MatPoly, d: RightDiffOp) -> MatPoly:
    """P D = sum_i P^(i) F_i, coefficients multiplied on the right."""
    if p.size != d.block_size:
        raise SizeMismatch(f"polynomial of block size {p.size} against an operator of block size {d.block_size}")
    terms = []
    for i, f in enumerate(d.coeffs):
        if f.is_zero() or i > p.degree:
            continue
        terms.append(matpoly_derivative(p, i) * f)
    return matpoly_sum(terms, p.size)


def symbolic_eigen(d: RightDiffOp) -> EigenSeq:
    """
    Lambda_n as polynomials in n for an operator of the algebra:
    Lambda_n = sum_i n(n-1)...(n-i+1) [x^i]F_i, read off the leading term of P_n D.
    """
    size = d.block_size
    grid: List[List[PolyN]] = [[PolyN.of() for _ in range(size)] for _ in range(size)]
    falling = PolyN.of(1)
    for i, f in enumerate(d.coeffs):
        top = f.coefficient(i)
        for r in range(size):
            for c in range(size):
                if top[(r, c)] != 0:
                    grid[r][c] = grid[r][c] + falling * top[(r, c)]
        falling = falling * PolyN.of(-i, 1)
    return EigenSeq.from_grid(grid)


def _residual(p: MatPoly, d: RightDiffOp, lam: MatrixR) -> MatPoly:
    return apply_right_op(p, d) - p.left_mul(lam)


def eigen_from_op(l: BlockTridiag, d: RightDiffOp, count: int) -> EigenSeq:
    """Lambda_n = degree-n coefficient of P_n D; raises NotBispectral if P_n D != Lambda_n P_n."""
    family = polys_from_recurrence(l, count)
    values: List[MatrixR] = []
    for n, p in enumerate(family.polys):
        lam = apply_right_op(p, d).coefficient(n)
        residual = _residual(p, d, lam)
        found = residual.first_nonzero()
        if found is not None:
            degree, row, col = found
            raise NotBispectral(n, found, residual.coefficient(degree)[(row, col)])
        values.append(lam)
    return EigenSeq.from_list(values)


def verify_bispectral(l: BlockTridiag, d: RightDiffOp, lam: EigenSeq, count: int) -> Report:
    """P_n D = Lambda_n P_n for n = 0..count-1; every failing n is listed."""
    if count < 1:
        raise InvalidCount(f"count must be >= 1, got {count}")
    if d.block_size != l.block_size or lam.block_size != l.block_size:
        raise SizeMismatch("operator, eigenvalues and recurrence must share the block size")
    family = polys_from_recurrence(l, count)
    details: List[ReportDetail] = []
    for n, p in enumerate(family.polys):
        residual = _residual(p, d, lam.at(n))
        found = residual.first_nonzero()
        if found is None:
            continue
        degree, row, col = found
        details.append(
            ReportDetail(
                location=f"n={n}, x^{degree}, entry ({row},{col})",
                expected="0",
                actual=str(residual.coefficient(degree)[(row, col)]),
            )
        )
    _logger.info("bispectral check, order %d, n < %d: %d failing", d.order, count, len(details))
    return Report.build(
        "bispectral",
        details,
        levels=l.levels,
        counts={"checked": count, "failing": len(details), "order": d.order},
    )


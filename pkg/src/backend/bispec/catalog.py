# src/backend/bispec/catalog.py
# Published operators and eigenvalues, transcribed coefficient by coefficient.
# Three transcriptions disagree with the computed data and are kept next to
# the corrected values:
#   - Darboux example at lambda = 7/2: F_2 carries 1/19, not 1/39 (the n^2
#     coefficient of Lambda_n and the x^1 coefficient of P_2 D both force 19).
#   - Jacobi-type second-order operator: the constant of F_1 is beta - alpha - 1;
#     alpha + beta - 1 agrees with it only at alpha = 0.
#   - Darboux example at lambda = 9/2: the printed Lambda_n is not an eigenvalue
#     sequence of the order-8 algebra. It agrees with the computed one at n = 0
#     but leaves the span once n = 2 is included, so the eigenvalues are
#     recovered from the order-8 search instead.

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Literal, Optional, Sequence, Tuple

from src.backend.bispec.diffop import EigenSeq, RightDiffOp
from src.backend.blockop.tridiag import BlockTridiag, darboux
from src.backend.exact.matpoly import MatPoly
from src.backend.exact.matrix import MatrixR
from src.backend.exact.polyn import PolyN
from src.backend.exact.rational import RationalLike, as_rational
from src.backend.weights.gegenbauer02 import gegenbauer02_recurrence
from src.backend.weights.weight import Weight, jacobi_weight

E = MatrixR.from_rows([[1, -1], [-1, 1]])

ExampleName = Literal["example1", "example2", "example3"]


def _e_poly(*coeffs: RationalLike) -> MatPoly:
    return MatPoly.scalar_poly(2, coeffs, times=E)


def _matrix_poly(*coeffs: Sequence[Sequence[RationalLike]]) -> MatPoly:
    return MatPoly.from_coeffs([MatrixR.from_rows(c) for c in coeffs])


def _scaled(grid: Sequence[Sequence[PolyN]], factor: RationalLike) -> List[List[PolyN]]:
    value = as_rational(factor)
    return [[p * value for p in row] for row in grid]


n = PolyN.n()


@dataclass(frozen=True)
class DarbouxExample:
    """A Darboux transform of the gegenbauer02 recurrence and its published data."""

    name: ExampleName
    lam: Fraction
    alpha0: MatrixR
    order: int
    eigen: Optional[EigenSeq]
    operator: Optional[RightDiffOp] = None
    comment: str = ""

    def recurrence(self, levels: int) -> BlockTridiag:
        _, transformed = darboux(gegenbauer02_recurrence(self.lam, levels), self.alpha0)
        return transformed


# =========================
# lambda = 5/2, alpha0 = [[5,2],[3,1]], order 4
# =========================

def _example1() -> DarbouxExample:
    operator = RightDiffOp.from_coeffs(
        [
            MatPoly.constant(MatrixR.from_rows([["-88/5", -8], ["-32/5", 0]])),
            _matrix_poly([["48/5", 0], ["-48/5", 0]], [[8, "-64/5"], [-16, "104/5"]]),
            _e_poly(0, "-216/5", "168/5"),
            _e_poly(0, 16, -32, 12),
            _e_poly(0, 0, 4, -4, 1),
        ]
    )
    grid = _scaled(
        [
            [(n + 2) * (5 * n**3 + 20 * n**2 + 3 * n - 44), -(5 * n**4 + 30 * n**3 + 43 * n**2 - 14 * n + 40)],
            [-(5 * n**4 + 30 * n**3 + 43 * n**2 + 2 * n + 32), n * (5 * n**3 + 30 * n**2 + 43 * n + 26)],
        ],
        Fraction(1, 5),
    )
    return DarbouxExample(
        name="example1",
        lam=Fraction(5, 2),
        alpha0=MatrixR.from_rows([[5, 2], [3, 1]]),
        order=4,
        eigen=EigenSeq.from_grid(grid),
        operator=operator,
        comment="order-4 operator; nothing of lower order besides the constants",
    )


# =========================
# lambda = 7/2, alpha0 = [[3,-1],[5,7]], order 6
# =========================

def _example2_operator(f2_denominator: int) -> RightDiffOp:
    return RightDiffOp.from_coeffs(
        [
            MatPoly.constant(MatrixR.from_rows([["-416/19", "-192/19"], ["352/19", 0]])),
            _matrix_poly(
                [["896/19", "-576/19"], ["-896/19", "576/19"]],
                [["-256/19", "96/19"], ["288/19", "-128/19"]],
            ),
            _e_poly(0, Fraction(-2368, f2_denominator), Fraction(2096, f2_denominator)),
            _e_poly(0, 96, -192, 80),
            _e_poly(0, -16, 72, -72, 20),
            _e_poly(0, 0, "-32/5", "72/5", "-48/5", 2),
            _e_poly(0, 0, 0, "-8/15", "4/5", "-2/5", "1/15"),
        ]
    )


def _example2(f2_denominator: int = 19) -> DarbouxExample:
    scalar = (19 * n**6 + 285 * n**5 + 1615 * n**4 + 4275 * n**3 + 2446 * n**2) * Fraction(1, 285)
    linear = _scaled(
        [[-12480 * n - 6240, 10080 * n - 2880], [12960 * n + 5280, -10560 * n]],
        Fraction(1, 285),
    )
    grid = [[scalar * E[(r, c)] + linear[r][c] for c in range(2)] for r in range(2)]
    return DarbouxExample(
        name="example2",
        lam=Fraction(7, 2),
        alpha0=MatrixR.from_rows([[3, -1], [5, 7]]),
        order=6,
        eigen=EigenSeq.from_grid(grid),
        operator=_example2_operator(f2_denominator),
        comment=f"order-6 operator, F_2 over {f2_denominator}",
    )


# =========================
# lambda = 9/2, alpha0 = [[1,0],[0,0]], order 8 (eigenvalues only)
# =========================

def _example3_printed_eigen() -> EigenSeq:
    a = n**4 + 10 * n**3 + 59 * n**2 + 170 * n + 840
    b = n**4 + 14 * n**3 + 95 * n**2 + 322 * n + 1080
    g = n**6 + 21 * n**5 + 169 * n**4 + 651 * n**3 + 1198 * n**2 + 840 * n - 20160
    d = n**4 + 18 * n**3 + 143 * n**2 + 558 * n + 1512
    grid = [
        [(n - 3) * (n + 6) * (n + 7) * (n + 8) * a, -((n - 2) * n * (n + 7) * (n + 8) * b)],
        [-((n + 1) * (n + 6) * g), (n - 1) * n * (n + 1) * (n + 10) * d],
    ]
    return EigenSeq.from_grid(grid)


def _example3(eigen: Optional[EigenSeq] = None) -> DarbouxExample:
    return DarbouxExample(
        name="example3",
        lam=Fraction(9, 2),
        alpha0=MatrixR.from_rows([[1, 0], [0, 0]]),
        order=8,
        eigen=eigen,
        comment="order-8 operator; neither it nor a consistent Lambda_n is published" if eigen is None else "printed Lambda_n",
    )


def darboux_example(name: ExampleName) -> DarbouxExample:
    if name == "example1":
        return _example1()
    if name == "example2":
        return _example2()
    if name == "example3":
        return _example3()
    raise KeyError(f"unknown example {name!r}")


def example2_as_printed() -> DarbouxExample:
    """The lambda = 7/2 data with F_2 over 39, as transcribed; fails verification from n = 2."""
    return _example2(f2_denominator=39)


def example3_as_printed() -> DarbouxExample:
    """The lambda = 9/2 data with the printed Lambda_n; outside the span of the computed eigenvalues from n = 2."""
    return _example3(_example3_printed_eigen())


# =========================
# Jacobi-type weights
# =========================

def jacobi_second_order(alpha: RationalLike, beta: RationalLike, *, as_printed: bool = False) -> Tuple[RightDiffOp, EigenSeq]:
    """
    F_2 = (1 - x^2) E, F_1 = (c - x (alpha + beta + 3)) E, F_0 = 0 with
    Lambda_n = -n (n + alpha + beta + 2) E. c = beta - alpha - 1, or
    alpha + beta - 1 with as_printed.
    """
    a, b = as_rational(alpha), as_rational(beta)
    constant = a + b - 1 if as_printed else b - a - 1
    operator = RightDiffOp.from_coeffs(
        [
            MatPoly.zero(2),
            _e_poly(constant, -(a + b + 3)),
            _e_poly(1, 0, -1),
        ]
    )
    eigen = EigenSeq.from_grid([[-(n * (n + a + b + 2)) * E[(r, c)] for c in range(2)] for r in range(2)])
    return operator, eigen


def matrix_mass_configurations() -> Dict[str, Tuple[MatrixR, MatrixR]]:
    """(V, W) for alpha = beta = 0: mass V at -1 and W at 1."""
    return {
        "equal_rank_one_diagonal": (MatrixR.diagonal([1, 0]), MatrixR.diagonal([1, 0])),
        "split_diagonal": (MatrixR.diagonal([1, 0]), MatrixR.diagonal([0, 1])),
        "rank_one": (MatrixR.from_rows([[1, 2], [2, 4]]), MatrixR.from_rows([[4, 2], [2, 1]])),
        "generic": (MatrixR.from_rows([[2, 1], [1, 3]]), MatrixR.from_rows([[5, 1], [1, 2]])),
    }


def koornwinder_weight(w_mass: RationalLike, v_mass: RationalLike) -> Weight:
    """Scalar Lebesgue measure on [-1, 1] plus w_mass at 1 and v_mass at -1 (zero masses dropped)."""
    w = as_rational(w_mass)
    v = as_rational(v_mass)
    return jacobi_weight(
        0,
        0,
        block_size=1,
        w=MatrixR.scalar(1, w) if w else None,
        v=MatrixR.scalar(1, v) if v else None,
    )

from __future__ import annotations

import random
from fractions import Fraction

import pytest

from src.backend.exact.linalg import determinant, linsolve, mat_inverse, nullspace_basis, rank, rref
from src.backend.exact.matpoly import MatPoly, matpoly_derivative, matpoly_mul
from src.backend.exact.matrix import MatrixR
from src.backend.exact.polyn import PolyN, polyn_from_json
from src.backend.exact.rational import as_rational, format_rational, parse_rational
from src.shared.errors import SingularMatrix, SizeMismatch
from tests.conftest import I2, J, S, mat


# =========================
# Rationals
# =========================

@pytest.mark.parametrize(
    "text, expected",
    [("3", Fraction(3)), ("-4/6", Fraction(-2, 3)), (" 7 / 14 ", Fraction(1, 2)), ("+5/1", Fraction(5)), ("0/9", Fraction(0))],
)
def test_parse_rational_canonicalizes(text, expected):
    assert parse_rational(text) == expected


@pytest.mark.parametrize("text", ["0.5", "1e3", "1/0", "one", "", "2/-3"])
def test_parse_rational_rejects_inexact_or_malformed(text):
    with pytest.raises(ValueError):
        parse_rational(text)


def test_format_rational_is_canonical():
    assert format_rational(Fraction(6, 3)) == "2"
    assert format_rational(Fraction(-3, 6)) == "-1/2"
    assert format_rational(Fraction(0)) == "0"


def test_as_rational_refuses_floats_and_bools():
    with pytest.raises(TypeError):
        as_rational(0.5)  # type: ignore[arg-type]
    with pytest.raises(TypeError):
        as_rational(True)


# =========================
# Matrices
# =========================

def test_inverse_examples():
    assert mat_inverse(I2) == I2
    assert mat_inverse(mat([5, 2], [3, 1])) == mat([-1, 2], [3, -5])
    with pytest.raises(SingularMatrix):
        mat_inverse(J)


def test_inverse_of_3x3_goes_through_elimination():
    m = mat([2, 0, 1], [1, 1, 0], [0, 3, 1])
    assert m.matmul(mat_inverse(m)) == MatrixR.identity(3)


def random_matrix(rng: random.Random, n_rows: int, n_cols: int) -> MatrixR:
    return MatrixR.from_rows([[Fraction(rng.randint(-9, 9), rng.randint(1, 5)) for _ in range(n_cols)] for _ in range(n_rows)])


@pytest.mark.parametrize("size", [1, 2, 3, 4])
def test_random_inverses_are_exact(size):
    rng = random.Random(1234 + size)
    checked = 0
    while checked < 10:
        m = random_matrix(rng, size, size)
        if determinant(m) == 0:
            continue
        inverse = mat_inverse(m)
        assert inverse.matmul(m) == MatrixR.identity(size)
        assert m.matmul(inverse) == MatrixR.identity(size)
        checked += 1


def test_matmul_shape_mismatch():
    with pytest.raises(SizeMismatch):
        mat([1, 2]).matmul(mat([1, 2]))


def test_ragged_rows_rejected():
    with pytest.raises(SizeMismatch):
        MatrixR.from_rows([[1, 2], [3]])


def test_linsolve_examples():
    b = mat([1, 2], [3, 4])
    assert linsolve(I2, b) == b
    assert linsolve(S.scale(Fraction(4, 15)), I2.scale(Fraction(4, 15))) == S
    with pytest.raises(SingularMatrix):
        linsolve(J, b)


def test_nullspace_examples():
    assert len(nullspace_basis(MatrixR.zero(2))) == 2
    assert nullspace_basis(I2) == []
    (v,) = nullspace_basis(J)
    assert v[0] == -v[1] != 0


def test_rank_and_determinant():
    assert rank(J) == 1
    assert rank(I2) == 2
    assert determinant(mat([5, 2], [3, 1])) == -1
    assert determinant(J) == 0


def test_rref_with_augmented_column():
    reduced, pivots = rref([[Fraction(2), Fraction(4), Fraction(6)], [Fraction(1), Fraction(3), Fraction(5)]], n_cols=2)
    assert pivots == [0, 1]
    assert reduced[0][2] == -1 and reduced[1][2] == 2


@pytest.mark.parametrize("n_rows, n_cols, inner", [(3, 3, 3), (3, 5, 2), (4, 4, 1), (5, 3, 3), (4, 6, 4)])
def test_rank_plus_nullity(n_rows, n_cols, inner):
    rng = random.Random(n_rows * 100 + n_cols * 10 + inner)
    for _ in range(5):
        # product of n_rows x inner and inner x n_cols factors: rank <= inner
        m = random_matrix(rng, n_rows, inner).matmul(random_matrix(rng, inner, n_cols))
        basis = nullspace_basis(m)
        assert rank(m) <= inner
        assert rank(m) + len(basis) == n_cols
        for v in basis:
            assert any(x != 0 for x in v)


# =========================
# Matrix polynomials
# =========================

def test_matpoly_mul_examples():
    x = MatPoly.x(2)
    assert matpoly_mul(x, x) == MatPoly.monomial(I2, 2)
    left = MatPoly.from_coeffs([S.scale(Fraction(-1, 5)), I2])
    product = matpoly_mul(left, MatPoly.constant(S))
    assert product == MatPoly.from_coeffs([I2.scale(Fraction(-1, 5)), S])
    assert matpoly_mul(x, MatPoly.zero(2)).is_zero()


def test_matpoly_mul_is_noncommutative():
    p = MatPoly.from_coeffs([mat([1, 2], [0, 1]), I2])
    q = MatPoly.constant(mat([0, 0], [1, 0]))
    assert p * q != q * p


def test_matpoly_derivative_examples():
    x2 = MatPoly.monomial(I2, 2)
    assert matpoly_derivative(x2, 1) == MatPoly.monomial(I2.scale(2), 1)
    assert matpoly_derivative(x2, 2) == MatPoly.constant(I2.scale(2))
    assert matpoly_derivative(MatPoly.constant(S), 1).is_zero()


def random_matpoly(rng: random.Random, size: int, max_degree: int) -> MatPoly:
    return MatPoly.from_coeffs([random_matrix(rng, size, size) for _ in range(rng.randint(1, max_degree + 1))])


def test_derivative_product_rule():
    rng = random.Random(42)
    for _ in range(20):
        p = random_matpoly(rng, 2, 4)
        q = random_matpoly(rng, 2, 4)
        assert (p * q).derivative() == p.derivative() * q + p * q.derivative()


def test_matpoly_strips_trailing_zeros():
    p = MatPoly.from_coeffs([S, MatrixR.zero(2), MatrixR.zero(2)])
    assert p.degree == 0
    assert MatPoly.zero(2).degree == -1


def test_matpoly_evaluate_and_monic():
    p = MatPoly.from_coeffs([-I2, I2])
    assert p.is_monic()
    assert p.evaluate(3) == I2.scale(2)


# =========================
# Polynomials in n
# =========================

def test_polyn_arithmetic():
    n = PolyN.n()
    p = (n + 2) * (n - 1)
    assert p == PolyN.of(-2, 1, 1)
    assert p.evaluate(3) == 10
    assert (n**3).degree == 3
    assert (1 - n).coeffs == (Fraction(1), Fraction(-1))


def test_polyn_json():
    p = polyn_from_json(["-88/5", "-38/5", "43/5", "6", "1"])
    assert p.evaluate(0) == Fraction(-88, 5)
    assert p.to_json() == ["-88/5", "-38/5", "43/5", "6", "1"]

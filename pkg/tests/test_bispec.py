from __future__ import annotations

from fractions import Fraction

import pytest

from src.backend.bispec.catalog import (
    darboux_example,
    example2_as_printed,
    example3_as_printed,
    jacobi_second_order,
    koornwinder_weight,
)
from src.backend.bispec.construct import construct_operator
from src.backend.bispec.diffop import EigenSeq, RightDiffOp, apply_right_op, eigen_from_op, symbolic_eigen, verify_bispectral
from src.backend.bispec.search import algebra_search, default_n_train, operator_span_coefficients, span_coefficients
from src.backend.exact.matpoly import MatPoly
from src.backend.exact.matrix import MatrixR
from src.backend.exact.polyn import PolyN
from src.backend.mop.recurrence import recurrence_from_moments
from src.backend.weights.gegenbauer02 import gegenbauer02_recurrence
from src.backend.weights.moments import moments
from src.backend.weights.weight import Weight, jacobi_weight
from src.shared.errors import DegreeExceeded, InsufficientLevels, InvalidCount, NotBispectral, SizeMismatch, WindowExhausted
from tests.conftest import E, I2, J, S, mat


def recurrence_for(w: Weight, levels: int):
    return recurrence_from_moments(moments(w, 2 * levels + 1), levels)


# =========================
# Operators and eigenvalues
# =========================

def test_degree_bound_on_coefficients():
    with pytest.raises(DegreeExceeded):
        RightDiffOp.from_coeffs([MatPoly.x(2)])
    assert RightDiffOp.from_coeffs([MatPoly.zero(2), MatPoly.x(2)]).order == 1


def test_apply_right_op():
    d = RightDiffOp.from_coeffs([MatPoly.zero(2), MatPoly.zero(2), MatPoly.constant(S)])
    assert apply_right_op(MatPoly.monomial(I2, 2), d) == MatPoly.constant(S.scale(2))
    assert apply_right_op(MatPoly.x(2), d).is_zero()
    shift = RightDiffOp.constant(S)
    assert apply_right_op(MatPoly.from_coeffs([I2, I2]), shift) == MatPoly.from_coeffs([S, S])


def test_apply_right_op_block_size_mismatch():
    with pytest.raises(SizeMismatch):
        apply_right_op(MatPoly.x(1), RightDiffOp.constant(I2))


def test_eigen_seq_forms():
    grid = EigenSeq.from_grid([[PolyN.n(), PolyN.of(1)], [PolyN.of(0), PolyN.n() * PolyN.n()]])
    assert grid.at(3) == mat([3, 1], [0, 9])
    assert grid.available is None
    listed = grid.take(4)
    assert listed.available == 4
    assert listed.at(2) == mat([2, 1], [0, 4])
    with pytest.raises(InsufficientLevels):
        listed.at(4)


def test_eigen_seq_rejects_inconsistent_forms():
    with pytest.raises(ValueError):
        EigenSeq(2, explicit=(I2,), poly_in_n=((PolyN.of(2), PolyN.of()), (PolyN.of(), PolyN.of(2))))


def test_eigen_from_op_rejects_non_commuting_constant(l52):
    with pytest.raises(NotBispectral) as excinfo:
        eigen_from_op(l52, RightDiffOp.constant(MatrixR.diagonal([1, 2])), 3)
    assert excinfo.value.level <= 2


def test_eigen_from_op_constant_in_commutant(l52):
    eigen = eigen_from_op(l52, RightDiffOp.constant(S), 4)
    assert all(eigen.at(n) == S for n in range(4))


# =========================
# Catalog examples
# =========================

def test_example1_eigenvalues_at_zero():
    ex = darboux_example("example1")
    assert ex.eigen.at(0) == mat([Fraction(-88, 5), -8], [Fraction(-32, 5), 0])
    assert ex.operator.coefficient(0).coefficient(0) == ex.eigen.at(0)


def test_example3_printed_eigenvalues_at_zero():
    assert example3_as_printed().eigen.at(0) == mat([-846720, 0], [120960, 0])


def test_example3_carries_no_eigenvalues():
    ex = darboux_example("example3")
    assert ex.eigen is None
    assert ex.operator is None
    assert ex.order == 8


def test_unknown_example():
    with pytest.raises(KeyError):
        darboux_example("example4")  # type: ignore[arg-type]


@pytest.mark.parametrize("name", ["example1", "example2"])
def test_published_operators_verify(name):
    ex = darboux_example(name)
    report = verify_bispectral(ex.recurrence(11), ex.operator, ex.eigen, 11)
    assert report.passed, report.details
    assert report.meta.counts["order"] == ex.order


@pytest.mark.parametrize("name", ["example1", "example2"])
def test_eigen_from_op_matches_published_eigenvalues(name):
    ex = darboux_example(name)
    computed = eigen_from_op(ex.recurrence(8), ex.operator, 8)
    assert all(computed.at(n) == ex.eigen.at(n) for n in range(8))
    symbolic = symbolic_eigen(ex.operator)
    assert all(symbolic.at(n) == ex.eigen.at(n) for n in range(12))


def test_example2_as_printed_fails_from_n_equals_2():
    ex = example2_as_printed()
    report = verify_bispectral(ex.recurrence(11), ex.operator, ex.eigen, 11)
    assert not report.passed
    assert report.details[0].location.startswith("n=2")


def test_verify_needs_a_level(l52):
    with pytest.raises(InvalidCount):
        verify_bispectral(l52, RightDiffOp.constant(I2), EigenSeq.from_list([I2]), 0)


def test_verify_lists_every_failing_level(l52):
    report = verify_bispectral(l52, RightDiffOp.constant(MatrixR.diagonal([1, 2])), EigenSeq.from_list([MatrixR.diagonal([1, 2])] * 5), 5)
    assert not report.passed
    assert report.meta.counts["failing"] == len(report.details) == 4


# =========================
# Jacobi-type operators
# =========================

def test_second_order_operator_with_corrected_constant():
    operator, eigen = jacobi_second_order(1, 2)
    l = recurrence_for(jacobi_weight(1, 2, v=J, w=J.scale(2)), 9)
    assert verify_bispectral(l, operator, eigen, 9).passed
    assert eigen.at(3) == E.scale(-3 * 8)


def test_second_order_operator_as_printed_fails_for_nonzero_alpha():
    printed, eigen = jacobi_second_order(1, 2, as_printed=True)
    l = recurrence_for(jacobi_weight(1, 2, v=J, w=J.scale(2)), 9)
    assert not verify_bispectral(l, printed, eigen, 9).passed


def test_printed_constant_agrees_at_alpha_zero():
    corrected, _ = jacobi_second_order(0, 3)
    printed, _ = jacobi_second_order(0, 3, as_printed=True)
    assert corrected == printed


# =========================
# Construction
# =========================

def test_constructed_operator_spans_with_identity():
    ex = darboux_example("example1")
    l = ex.recurrence(12)
    built = construct_operator(l, ex.eigen, ex.order)
    assert built.coefficient(0).coefficient(0) == ex.eigen.at(0)
    assert verify_bispectral(l, built, ex.eigen, 11).passed
    assert operator_span_coefficients(built, [ex.operator, RightDiffOp.constant(I2)]) is not None


def test_construct_order_zero_from_scalar_eigenvalues(l52):
    built = construct_operator(l52, EigenSeq.from_list([I2.scale(3)] * l52.levels), 0)
    assert built == RightDiffOp.constant(I2.scale(3))


def test_construct_needs_two_levels_beyond_the_order(l52):
    with pytest.raises(WindowExhausted):
        construct_operator(l52.truncate(2), EigenSeq.from_list([I2, I2]), 1)


def test_construct_rejects_negative_order(l52):
    with pytest.raises(InvalidCount):
        construct_operator(l52, EigenSeq.from_list([I2] * l52.levels), -1)


# =========================
# Algebra search
# =========================

def test_search_on_gegenbauer_finds_first_order():
    l = gegenbauer02_recurrence(Fraction(5, 2), 2 * 2 + 6 + 5)
    result = algebra_search(l, 2)
    assert result.dimension(0) == 2
    assert result.minimal_order == 1
    assert result.verify_failures == ()
    assert result.n_train == 10
    for d in result.basis[1]:
        eigen = eigen_from_op(l, d, l.levels)
        assert verify_bispectral(l, d, eigen, l.levels).passed


def test_search_needs_enough_levels(l52):
    with pytest.raises(InsufficientLevels):
        algebra_search(l52, 2)


def test_search_rejects_negative_order(l52):
    with pytest.raises(InvalidCount):
        algebra_search(l52, -1)


@pytest.mark.parametrize("max_order", [1, 2, 3])
def test_search_dimensions_stable_under_more_training(max_order):
    n_train = default_n_train(max_order)
    l = gegenbauer02_recurrence(Fraction(5, 2), n_train + 3 + 5)
    base = algebra_search(l, max_order, n_train=n_train)
    longer = algebra_search(l, max_order, n_train=n_train + 3)
    assert base.dims == longer.dims
    assert base.verify_failures == longer.verify_failures == ()
    assert base.minimal_order == 1


@pytest.mark.parametrize("w_mass, v_mass, order", [(0, 0, 2), (1, 0, 4)])
def test_koornwinder_minimal_orders(w_mass, v_mass, order):
    l = recurrence_for(koornwinder_weight(w_mass, v_mass), 2 * order + 6 + 5)
    result = algebra_search(l, order)
    assert result.dimension(0) == 1
    assert result.minimal_order == order


def test_search_new_and_dimension_bookkeeping():
    l = recurrence_for(koornwinder_weight(0, 0), 15)
    result = algebra_search(l, 2, n_train=10, n_verify=5)
    assert list(result.dims) == [1, 1, 2]
    assert [result.new(s) for s in range(3)] == [1, 0, 1]


# =========================
# Span membership
# =========================

def test_span_coefficients_recovers_a_combination():
    ex = darboux_example("example1")
    constant = EigenSeq.from_list([I2] * 6)
    target = EigenSeq.from_list([ex.eigen.at(n).scale(2) + I2.scale(3) for n in range(6)])
    assert span_coefficients(target, [ex.eigen, constant], 6) == (Fraction(2), Fraction(3))


def test_span_coefficients_outside_the_span():
    target = EigenSeq.from_list([S] * 3)
    assert span_coefficients(target, [EigenSeq.from_list([I2] * 3)], 3) is None


def test_operator_span_coefficients():
    ex = darboux_example("example1")
    identity = RightDiffOp.constant(I2)
    target = ex.operator.scale(2) + identity.scale(-1)
    assert operator_span_coefficients(target, [ex.operator, identity]) == (Fraction(2), Fraction(-1))
    assert operator_span_coefficients(RightDiffOp.constant(S), [identity]) is None

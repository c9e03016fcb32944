from __future__ import annotations

from fractions import Fraction

import pytest

from src.backend.blockop.banded import (
    ad,
    ad_bracket_power,
    ad_condition_check,
    banded_block_diag,
    banded_from_bidiag,
    banded_from_tridiag,
    banded_identity,
    banded_multiply,
    factorization_check,
    intertwine_check,
)
from src.backend.blockop.tridiag import BlockTridiag, blocks_match_check, darboux, dual_form_check
from src.backend.weights.gegenbauer02 import gegenbauer02_recurrence
from src.backend.exact.matrix import MatrixR
from src.shared.errors import InsufficientLevels, InvalidCount, SingularPivot, SizeMismatch, WindowExhausted
from tests.conftest import I2, S, mat


def scalar_operator(b: int, a: int, levels: int) -> BlockTridiag:
    return BlockTridiag.from_blocks([mat([b])] * levels, [mat([a])] * (levels - 1))


# =========================
# Factorization and transform
# =========================

def test_darboux_with_identity_alpha0(l52):
    pair, l = darboux(l52, I2)
    assert pair.betas[0].is_zero()
    assert pair.betas[1] == S.scale(Fraction(1, 5))
    assert pair.alphas[1] == S.scale(Fraction(4, 5))
    assert l.b(0) == I2
    assert l.a(1) == S.scale(Fraction(1, 5))
    assert l.b(1) == S
    assert l.levels == l52.levels


def test_darboux_scalar_constant_operator():
    pair, l = darboux(scalar_operator(2, 1, 8), mat([1]))
    assert all(beta == mat([1]) for beta in pair.betas[1:])
    assert all(alpha == mat([1]) for alpha in pair.alphas)
    assert l.b(0) == mat([1])
    assert all(l.b(n) == mat([2]) for n in range(1, 8))
    assert all(l.a(n) == mat([1]) for n in range(1, 8))


def test_alpha0_equal_to_b0_is_a_singular_pivot(l52):
    with pytest.raises(SingularPivot) as excinfo:
        darboux(l52, l52.b(0))
    assert excinfo.value.level == 1


def test_alpha0_shape_is_checked(l52):
    with pytest.raises(SizeMismatch):
        darboux(l52, MatrixR.identity(3))


def test_truncate_beyond_levels(l52):
    assert l52.truncate(4).levels == 4
    with pytest.raises(InsufficientLevels):
        l52.truncate(13)


def test_dual_forms_agree(l52):
    pair, _ = darboux(l52, I2)
    report = dual_form_check(l52, pair)
    assert report.passed, report.details


def test_factorization_reproduces_l0(l52):
    pair, _ = darboux(l52, I2)
    report = factorization_check(l52, pair)
    assert report.passed, report.details
    assert report.meta.counts["exact_window"] == l52.levels - 1


def test_blocks_match_check(l52):
    _, l = darboux(l52, I2)
    assert blocks_match_check(l52, l52, 6).passed
    failing = blocks_match_check(l52, l, 3)
    assert not failing.passed
    assert failing.details[0].location == "B_0"
    with pytest.raises(InsufficientLevels):
        blocks_match_check(l52, l52.truncate(3), 5)


# =========================
# Intertwining
# =========================

def test_beta_intertwines_l0_and_l(l52):
    pair, l = darboux(l52, I2)
    report = intertwine_check(banded_from_bidiag(pair, "beta"), l52, l)
    assert report.passed, report.details


def test_identity_does_not_intertwine_distinct_operators(l52):
    _, l = darboux(l52, I2)
    report = intertwine_check(banded_identity(2, l52.levels), l52, l)
    assert not report.passed
    assert report.details[0].location == "block (0,0)"


def test_intertwine_rejects_level_mismatch(l52):
    pair, l = darboux(l52, I2)
    with pytest.raises(SizeMismatch):
        intertwine_check(banded_from_bidiag(pair, "beta"), l52.truncate(5), l)


# =========================
# Banded products and brackets
# =========================

def test_multiply_shrinks_window(l52):
    lb = banded_from_tridiag(l52)
    product = banded_multiply(lb, lb)
    assert (product.lower, product.upper) == (2, 2)
    assert product.exact_window == l52.levels - 1


def test_ad_of_scalar_diagonal_vanishes(l52):
    lb = banded_from_tridiag(l52)
    x = banded_block_diag([I2.scale(7)] * l52.levels)
    assert ad(lb, x).is_zero_on_window()


def test_ad_of_level_index_gives_identity_superdiagonal(l52):
    bracket = ad_bracket_power(l52, [I2.scale(n) for n in range(l52.levels)], 1)
    window = bracket.exact_window
    assert window == l52.levels - 1
    for r in range(window - 1):
        assert bracket.block(r, r + 1) == I2
        assert bracket.block(r, r) == MatrixR.zero(2)
        if r >= 1:
            assert bracket.block(r, r - 1) == -l52.a(r)


def test_ad_condition_check_fails_for_a_generic_diagonal(l52):
    report = ad_condition_check(l52, [I2.scale(n) for n in range(l52.levels)], 2)
    assert not report.passed
    assert report.meta.counts["power"] == 2


def test_ad_bracket_power_window_exhausted(l52):
    short = l52.truncate(3)
    with pytest.raises(WindowExhausted):
        ad_bracket_power(short, [I2] * 3, 3)


def test_banded_from_bidiag_rejects_unknown_factor(l52):
    pair, _ = darboux(l52, I2)
    with pytest.raises(ValueError):
        banded_from_bidiag(pair, "gamma")


def test_ad_bracket_power_needs_a_positive_power(l52):
    with pytest.raises(InvalidCount):
        ad_bracket_power(l52, [I2] * l52.levels, 0)


def test_truncate_to_no_levels(l52):
    with pytest.raises(InvalidCount):
        l52.truncate(0)


@pytest.mark.parametrize("levels, power", [(8, 2), (9, 3), (10, 4)])
def test_ad_bracket_power_window_ignores_truncation(levels, power):
    short = gegenbauer02_recurrence(Fraction(5, 2), levels)
    long = gegenbauer02_recurrence(Fraction(5, 2), levels + 5)
    cubes = [I2.scale(n**3) for n in range(levels + 5)]
    small = ad_bracket_power(short, cubes[:levels], power)
    big = ad_bracket_power(long, cubes, power)
    window = levels - power
    assert small.exact_window == window
    assert big.exact_window == window + 5
    assert small.window_entries()
    for r in range(window):
        for c in range(window):
            assert small.block(r, c) == big.block(r, c), (r, c)

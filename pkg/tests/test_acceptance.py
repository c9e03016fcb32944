from __future__ import annotations

import pytest

from src.backend.bispec.catalog import matrix_mass_configurations
from src.backend.pipeline.steps import (
    KOORNWINDER_ORDERS,
    MASS_CLAIMS,
    MASS_CLAIMS_AS_PRINTED,
    run_ad_conditions,
    run_closed_form,
    run_construction,
    run_darboux_example,
    run_darboux_properties,
    run_example3,
    run_first_order,
    run_jacobi_second_order,
    run_koornwinder,
    run_matrix_masses,
    run_printed_example2,
    run_weight_properties,
    run_wtilde_matching,
)
from src.shared.schemas import SuiteState


def failing(state: SuiteState):
    return {r.check: [d.location for d in r.details] for r in state.reports if not r.passed}


# =========================
# Original family
# =========================

def test_closed_form_for_three_lambdas():
    state = run_closed_form(SuiteState())
    assert len(state.reports) == 3
    assert state.passed, failing(state)


def test_original_family_is_first_order():
    state = run_first_order(SuiteState())
    assert state.passed, failing(state)
    assert state.reports[0].meta.counts["minimal_order"] == 1


# =========================
# Darboux examples
# =========================

@pytest.mark.slow
def test_example1_order_four():
    state = run_darboux_example(SuiteState(), "example1")
    assert [r.check for r in state.reports] == ["example1:bispectral", "example1:eigen_from_operator", "example1:order"]
    assert state.passed, failing(state)


@pytest.mark.slow
def test_example2_order_six():
    state = run_darboux_example(SuiteState(), "example2")
    assert state.passed, failing(state)


def test_example2_as_printed_is_rejected():
    assert run_printed_example2(SuiteState()).passed


@pytest.mark.slow
def test_example3_order_eight():
    state = run_example3(SuiteState())
    assert [r.check for r in state.reports] == ["example3:order", "example3:printed_lambda0", "example3:printed_lambda_rejected"]
    assert state.passed, failing(state)
    assert state.reports[0].notes


def test_ad_conditions_on_twenty_levels():
    state = run_ad_conditions(SuiteState())
    assert state.passed, failing(state)


def test_construction_recovers_printed_operators():
    state = run_construction(SuiteState())
    assert state.passed, failing(state)


def test_wtilde_matches_only_negative_sign():
    state = run_wtilde_matching(SuiteState())
    assert state.passed, failing(state)


# =========================
# Point masses
# =========================

@pytest.mark.slow
@pytest.mark.parametrize("label", sorted(MASS_CLAIMS))
def test_matrix_mass_orders(label):
    assert label in matrix_mass_configurations()
    state = run_matrix_masses(SuiteState(), only=[label])
    assert len(state.reports) == 1 + (label in MASS_CLAIMS_AS_PRINTED)
    assert state.passed, failing(state)


@pytest.mark.slow
@pytest.mark.parametrize(
    "label, dims, minimal_order",
    [("equal_rank_one_diagonal", [1, 1, 1, 1, 1, 2, 3], 5), ("split_diagonal", [1, 1, 1, 2, 2, 4, 6], 3)],
)
def test_mass_dimensions_differ_from_printed(label, dims, minimal_order):
    state = run_matrix_masses(SuiteState(), only=[label])
    counts = state.reports[0].meta.counts
    assert counts["dims"] == dims
    assert counts["minimal_order"] == minimal_order
    assert state.reports[1].check == f"masses {label}:printed_rejected"
    assert state.reports[1].meta.counts["failing_entries"] >= 1


def test_jacobi_second_order_operator():
    state = run_jacobi_second_order(SuiteState())
    # 2 (alpha, beta) x 2 mass scalings x (verify, printed rejected, order) + 2 mass-free searches
    assert len(state.reports) == 14
    assert state.passed, failing(state)


def test_koornwinder_orders():
    state = run_koornwinder(SuiteState())
    assert len(state.reports) == len(KOORNWINDER_ORDERS)
    assert state.passed, failing(state)


# =========================
# Property suites
# =========================

def test_weight_property_suite():
    state = run_weight_properties(SuiteState())
    assert state.passed, failing(state)
    assert {r.check.split(":")[-1] for r in state.reports} == {"orthogonality", "path_independence", "quadrature"}


def test_darboux_property_suite():
    state = run_darboux_properties(SuiteState())
    assert state.passed, failing(state)

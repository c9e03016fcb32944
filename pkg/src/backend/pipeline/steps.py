# src/backend/pipeline/steps.py
# Acceptance stages. Each run_* takes the suite state, appends its reports and
# returns the state, so stages can be run one by one or chained by workflow.py.

from __future__ import annotations

import logging
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence, Tuple

from src.backend.bispec.catalog import (
    darboux_example,
    example2_as_printed,
    example3_as_printed,
    jacobi_second_order,
    koornwinder_weight,
    matrix_mass_configurations,
)
from src.backend.bispec.construct import construct_operator
from src.backend.bispec.diffop import EigenSeq, RightDiffOp, symbolic_eigen, verify_bispectral
from src.backend.bispec.search import (
    DEFAULT_N_VERIFY,
    SearchResult,
    algebra_search,
    default_n_train,
    operator_span_coefficients,
    span_coefficients,
)
from src.backend.blockop.banded import ad_condition_check, banded_from_bidiag, factorization_check, intertwine_check
from src.backend.blockop.tridiag import BlockTridiag, blocks_match_check, darboux, dual_form_check
from src.backend.exact.matrix import MatrixR
from src.backend.mop.polys import families_equal, orthogonality_check, polys_from_moments, polys_from_recurrence
from src.backend.mop.recurrence import recurrence_from_moments
from src.backend.weights.darboux_gegenbauer02 import wtilde_weight
from src.backend.weights.gegenbauer02 import gegenbauer02_recurrence
from src.backend.weights.moments import moments
from src.backend.weights.quadrature import quadrature_check
from src.backend.weights.weight import Weight, gegenbauer02_weight, jacobi_weight
from src.shared.errors import DegenerateMoments
from src.shared.schemas import Report, ReportDetail, SuiteState

_logger = logging.getLogger(__name__)

J = MatrixR.from_rows([[1, 1], [1, 1]])


# =========================
# Helpers
# =========================

def _labelled(report: Report, label: str) -> Report:
    return report.model_copy(update={"check": f"{label}:{report.check}"})


def _claims(
    check: str,
    claims: Sequence[Tuple[str, Any, Any]],
    *,
    counts: Optional[Dict[str, Any]] = None,
    notes: Optional[List[str]] = None,
) -> Report:
    """One detail per (name, expected, actual) claim that does not hold."""
    details = [
        ReportDetail(location=name, expected=str(expected), actual=str(actual))
        for name, expected, actual in claims
        if expected != actual
    ]
    return Report.build(check, details, counts=counts, notes=notes)


def _search_counts(result: SearchResult) -> Dict[str, Any]:
    return {
        "dims": list(result.dims),
        "minimal_order": result.minimal_order,
        "n_train": result.n_train,
        "n_verify": result.n_verify,
        "verify_failures": list(result.verify_failures),
    }


def _search_levels(max_order: int, n_verify: int) -> int:
    return default_n_train(max_order) + n_verify


def _recurrence_for(w: Weight, levels: int) -> BlockTridiag:
    return recurrence_from_moments(moments(w, 2 * levels + 1), levels)


def _expect_failure(check: str, report: Report) -> Report:
    """Passes when `report` fails: used for transcriptions kept to document a discrepancy."""
    details = []
    if report.passed:
        details.append(ReportDetail(location=report.check, expected="fail", actual="pass"))
    return Report.build(check, details, counts={"failing_entries": len(report.details)})


# =========================
# Closed forms and first order
# =========================

def run_closed_form(state: SuiteState, lambdas: Sequence[Fraction] = (Fraction(5, 2), Fraction(7, 2), Fraction(9, 2)), levels: int = 9) -> SuiteState:
    """Recurrence extracted from the gegenbauer02 moments equals the closed form for n < levels."""
    for lam in lambdas:
        extracted = _recurrence_for(gegenbauer02_weight(lam), levels)
        report = blocks_match_check(gegenbauer02_recurrence(lam, levels), extracted, levels, check="closed_form")
        state.reports.append(_labelled(report, f"gegenbauer02 lambda={lam}"))
    return state


def run_first_order(state: SuiteState, *, n_verify: int = DEFAULT_N_VERIFY) -> SuiteState:
    max_order = 2
    l = gegenbauer02_recurrence(Fraction(5, 2), _search_levels(max_order, n_verify))
    result = algebra_search(l, max_order, n_verify=n_verify)
    state.reports.append(
        _claims(
            "gegenbauer02 lambda=5/2:first_order",
            [("minimal order", 1, result.minimal_order), ("verify failures", [], list(result.verify_failures))],
            counts=_search_counts(result),
        )
    )
    return state


# =========================
# Darboux examples
# =========================

def run_darboux_example(state: SuiteState, name: str, *, search: bool = True, n_verify: int = DEFAULT_N_VERIFY, count: int = 11) -> SuiteState:
    """Printed operator and eigenvalues verify on the transformed recurrence; optionally the order claims too."""
    ex = darboux_example(name)  # type: ignore[arg-type]
    levels = max(count, _search_levels(ex.order, n_verify) if search else count)
    l = ex.recurrence(levels)
    if ex.operator is not None:
        state.reports.append(_labelled(verify_bispectral(l, ex.operator, ex.eigen, count), name))
        symbolic = span_coefficients(ex.eigen, [symbolic_eigen(ex.operator)], count)
        state.reports.append(
            _claims(f"{name}:eigen_from_operator", [("Lambda_n = sum_i [n]_i [x^i] F_i", (Fraction(1),), symbolic)])
        )
    if search:
        result = algebra_search(l, ex.order, n_verify=n_verify)
        state.reports.append(
            _claims(
                f"{name}:order",
                [
                    (f"d({ex.order - 1}) - d(0)", 0, result.dimension(ex.order - 1) - result.dimension(0)),
                    (f"new({ex.order})", 1, result.new(ex.order)),
                    ("verify failures", [], list(result.verify_failures)),
                ],
                counts=_search_counts(result),
            )
        )
    return state


def run_printed_example2(state: SuiteState, count: int = 11) -> SuiteState:
    """F_2 over 39, as transcribed, must fail verification."""
    ex = example2_as_printed()
    report = verify_bispectral(ex.recurrence(count), ex.operator, ex.eigen, count)  # type: ignore[arg-type]
    state.reports.append(_expect_failure("example2:f2_over_39_rejected", report))
    return state


def _eigen_notes(eigen: EigenSeq) -> List[str]:
    """Coefficient listing of a polynomial Lambda_n; empty for constant sequences."""
    grid = eigen.poly_in_n or ()
    if all(p.degree <= 0 for row in grid for p in row):
        return []
    return [f"Lambda_n[{r}][{c}] coefficients in n: {poly.to_json()}" for r, row in enumerate(grid) for c, poly in enumerate(row)]


def run_example3(state: SuiteState, *, n_verify: int = DEFAULT_N_VERIFY, count: int = 20) -> SuiteState:
    """
    Minimal order 8 with one new operator. The eigenvalues are recovered from the
    computed basis; the printed Lambda_n agrees with them at n = 0 and must leave
    their span on n < count.
    """
    ex = darboux_example("example3")
    l = ex.recurrence(max(count, _search_levels(ex.order, n_verify)))
    result = algebra_search(l, ex.order, n_verify=n_verify)
    operators = list(result.basis.get(ex.order, ()))
    recovered = [symbolic_eigen(d) for d in operators]
    verified = bool(operators) and all(verify_bispectral(l, d, lam, count).passed for d, lam in zip(operators, recovered))
    notes = [line for lam in recovered for line in _eigen_notes(lam)]
    state.reports.append(
        _claims(
            "example3:order",
            [
                ("minimal order", 8, result.minimal_order),
                ("new(8)", 1, result.new(8)),
                ("verify failures", [], list(result.verify_failures)),
                ("recovered Lambda_n verify", True, verified),
            ],
            counts=_search_counts(result),
            notes=notes,
        )
    )

    printed = example3_as_printed().eigen
    spot = MatrixR.from_rows([[-846720, 0], [120960, 0]])
    at_zero = span_coefficients(printed, recovered, 1) if recovered else None  # type: ignore[arg-type]
    in_span = span_coefficients(printed, recovered, count) if recovered else None  # type: ignore[arg-type]
    state.reports.append(
        _claims(
            "example3:printed_lambda0",
            [("Lambda_0", spot, printed.at(0)), ("Lambda_0 in span", True, at_zero is not None)],  # type: ignore[union-attr]
        )
    )
    membership = _claims("example3:printed_in_span", [(f"Lambda_n in span for n < {count}", True, in_span is not None)])
    state.reports.append(_expect_failure("example3:printed_lambda_rejected", membership))
    return state


def run_ad_conditions(state: SuiteState, levels: int = 20) -> SuiteState:
    for name in ("example1", "example2"):
        ex = darboux_example(name)  # type: ignore[arg-type]
        l = ex.recurrence(levels)
        report = ad_condition_check(l, [ex.eigen.at(n) for n in range(levels)], ex.order + 1)
        state.reports.append(_labelled(report, name))
    return state


def run_construction(state: SuiteState, count: int = 11) -> SuiteState:
    """Rebuild D from L and Lambda and compare with the printed operator."""
    for name in ("example1", "example2"):
        ex = darboux_example(name)  # type: ignore[arg-type]
        l = ex.recurrence(count + 1)
        built = construct_operator(l, ex.eigen, ex.order)
        identity = RightDiffOp.constant(MatrixR.identity(2))
        coefficients = operator_span_coefficients(built, [ex.operator, identity])  # type: ignore[list-item]
        state.reports.append(_labelled(verify_bispectral(l, built, ex.eigen, count), f"{name} constructed"))
        state.reports.append(
            _claims(
                f"{name}:construction",
                [
                    ("F_0 = Lambda_0", ex.eigen.at(0), built.coefficient(0).coefficient(0)),
                    ("in span{printed D, I}", True, coefficients is not None),
                ],
                notes=[f"coefficients {[str(c) for c in coefficients]}"] if coefficients is not None else [],
            )
        )
    return state


# =========================
# Weights
# =========================

def run_wtilde_matching(state: SuiteState, levels: int = 7) -> SuiteState:
    """Only delta_sign = -1 reproduces the Darboux transform of the lambda = 5/2 recurrence."""
    lam = Fraction(5, 2)
    identity = MatrixR.identity(2)
    _, expected = darboux(gegenbauer02_recurrence(lam, levels), identity)
    matched: Dict[int, bool] = {}
    for sign in (-1, 1):
        try:
            extracted = _recurrence_for(wtilde_weight(lam, identity, sign), levels)
        except DegenerateMoments as exc:
            _logger.info("delta_sign=%d: %s", sign, exc)
            matched[sign] = False
            continue
        matched[sign] = blocks_match_check(expected, extracted, levels).passed
    state.reports.append(
        _claims(
            "wtilde lambda=5/2:moment_matching",
            [("delta_sign=-1 matches", True, matched[-1]), ("delta_sign=+1 matches", False, matched[1])],
            counts={"levels": levels},
        )
    )
    return state


# Order claims per (V, W) configuration at alpha = beta = 0, pinned to the
# computed dimensions. Two printed claims disagree with them:
#   - equal_rank_one_diagonal: d = [1, 1, 1, 1, 1, 2, 3], so one new operator at
#     order 5, not two.
#   - split_diagonal: d = [1, 1, 1, 2, 2, 4, 6], so the minimal order is 3 and the
#     order-3 operator verifies on every level checked.
MASS_CLAIMS: Dict[str, Tuple[int, List[Tuple[str, int]]]] = {
    "equal_rank_one_diagonal": (6, [("d(4)-d(0)", 0), ("new(5)", 1), ("new(6)", 1)]),
    "split_diagonal": (6, [("d(2)-d(0)", 0), ("new(3)", 1), ("new(4)", 0), ("new(5)", 2), ("new(6)", 2)]),
    "rank_one": (6, [("d(5)-d(0)", 0), ("new(6)", 2)]),
    "generic": (8, [("d(7)-d(0)", 0), ("new(8)", 1)]),
}


# Claims as printed, where they differ from the computed ones.
MASS_CLAIMS_AS_PRINTED: Dict[str, List[Tuple[str, int]]] = {
    "equal_rank_one_diagonal": [("d(4)-d(0)", 0), ("new(5)", 2), ("new(6)", 1)],
    "split_diagonal": [("d(5)-d(0)", 0), ("new(6)", 2)],
}

# Levels on which the minimal-order operators are verified past the search window.
MASS_VERIFY_LEVELS: Dict[str, int] = {"split_diagonal": 36}


def _claim_value(result: SearchResult, name: str) -> int:
    if name.startswith("new("):
        return result.new(int(name[4:-1]))
    order = int(name[2:name.index(")")])
    return result.dimension(order) - result.dimension(0)


def run_matrix_masses(state: SuiteState, *, n_verify: int = DEFAULT_N_VERIFY, only: Optional[Sequence[str]] = None) -> SuiteState:
    configurations = matrix_mass_configurations()
    for label, (max_order, expected) in MASS_CLAIMS.items():
        if only is not None and label not in only:
            continue
        v, w = configurations[label]
        count = MASS_VERIFY_LEVELS.get(label, 0)
        l = _recurrence_for(jacobi_weight(0, 0, w=w, v=v), max(count, _search_levels(max_order, n_verify)))
        result = algebra_search(l, max_order, n_verify=n_verify)
        claims = [(name, value, _claim_value(result, name)) for name, value in expected]
        if count:
            minimal = list(result.basis.get(result.minimal_order, ())) if result.minimal_order is not None else []
            verified = bool(minimal) and all(verify_bispectral(l, d, symbolic_eigen(d), count).passed for d in minimal)
            claims.append((f"order {result.minimal_order} verifies for n < {count}", True, verified))
        state.reports.append(_claims(f"masses {label}:order", claims, counts=_search_counts(result)))
        if label in MASS_CLAIMS_AS_PRINTED:
            printed = _claims(
                f"masses {label}:printed",
                [(name, value, _claim_value(result, name)) for name, value in MASS_CLAIMS_AS_PRINTED[label]],
            )
            state.reports.append(_expect_failure(f"masses {label}:printed_rejected", printed))
    return state


def run_jacobi_second_order(state: SuiteState, *, n_verify: int = DEFAULT_N_VERIFY, count: int = 9) -> SuiteState:
    """Second-order operator with masses c * [[1,1],[1,1]], and order 1 once the masses are dropped."""
    levels = _search_levels(2, n_verify)
    for alpha, beta in ((1, 2), (2, 1)):
        operator, eigen = jacobi_second_order(alpha, beta)
        printed, _ = jacobi_second_order(alpha, beta, as_printed=True)
        for c1, c2 in ((1, 2), (3, 5)):
            label = f"jacobi ({alpha},{beta}) V={c1}J W={c2}J"
            l = _recurrence_for(jacobi_weight(alpha, beta, v=J.scale(c1), w=J.scale(c2)), levels)
            state.reports.append(_labelled(verify_bispectral(l, operator, eigen, count), label))
            state.reports.append(_expect_failure(f"{label}:printed_f1_rejected", verify_bispectral(l, printed, eigen, count)))
            result = algebra_search(l, 2, n_verify=n_verify)
            state.reports.append(
                _claims(
                    f"{label}:order",
                    [
                        ("d(1)-d(0)", 0, result.dimension(1) - result.dimension(0)),
                        ("d(0)", 2, result.dimension(0)),
                        ("new(2) >= 1", True, result.new(2) >= 1),
                    ],
                    counts=_search_counts(result),
                )
            )
        bare = _recurrence_for(jacobi_weight(alpha, beta), _search_levels(1, n_verify))
        result = algebra_search(bare, 1, n_verify=n_verify)
        state.reports.append(
            _claims(f"jacobi ({alpha},{beta}) no masses:order", [("minimal order", 1, result.minimal_order)], counts=_search_counts(result))
        )
    return state


# (w_mass at 1, v_mass at -1) -> minimal order of the scalar Lebesgue weight with those masses
KOORNWINDER_ORDERS: Dict[Tuple[int, int], int] = {(0, 0): 2, (1, 0): 4, (1, 1): 4, (1, 2): 6}


def run_koornwinder(state: SuiteState, *, n_verify: int = DEFAULT_N_VERIFY) -> SuiteState:
    for (w_mass, v_mass), order in KOORNWINDER_ORDERS.items():
        l = _recurrence_for(koornwinder_weight(w_mass, v_mass), _search_levels(order, n_verify))
        result = algebra_search(l, order, n_verify=n_verify)
        state.reports.append(
            _claims(
                f"koornwinder W={w_mass} V={v_mass}:order",
                [("minimal order", order, result.minimal_order), ("verify failures", [], list(result.verify_failures))],
                counts=_search_counts(result),
            )
        )
    return state


# =========================
# Property suites
# =========================

def property_weights() -> Dict[str, Weight]:
    configurations = matrix_mass_configurations()
    weights = {
        "gegenbauer02 lambda=5/2": gegenbauer02_weight(Fraction(5, 2)),
        "gegenbauer02 lambda=7/2": gegenbauer02_weight(Fraction(7, 2)),
        "wtilde lambda=5/2": wtilde_weight(Fraction(5, 2), MatrixR.identity(2)),
        "jacobi (0,0) W=V=J": jacobi_weight(0, 0, w=J, v=J),
        "jacobi (1,2) V=J W=2J": jacobi_weight(1, 2, v=J, w=J.scale(2)),
        "koornwinder W=1 V=2": koornwinder_weight(1, 2),
    }
    for label, (v, w) in configurations.items():
        weights[f"masses {label}"] = jacobi_weight(0, 0, w=w, v=v)
    return weights


def run_weight_properties(state: SuiteState, count: int = 7) -> SuiteState:
    """Orthogonality, path independence and the quadrature oracle for every suite weight."""
    for label, w in property_weights().items():
        mu = moments(w, 2 * count + 1)
        from_recurrence = polys_from_recurrence(recurrence_from_moments(mu, count), count)
        state.reports.append(_labelled(orthogonality_check(from_recurrence, mu), label))
        state.reports.append(_labelled(families_equal(from_recurrence, polys_from_moments(mu, count)), label))
        state.reports.append(_labelled(quadrature_check(w, count + 1), label))
    return state


def run_darboux_properties(state: SuiteState, levels: int = 12) -> SuiteState:
    """Factorization roundtrip, both closed forms of the new blocks and beta-intertwining."""
    cases = [("gegenbauer02 lambda=5/2 alpha0=I", Fraction(5, 2), MatrixR.identity(2))]
    for name in ("example1", "example2", "example3"):
        ex = darboux_example(name)  # type: ignore[arg-type]
        cases.append((name, ex.lam, ex.alpha0))
    for label, lam, alpha0 in cases:
        l0 = gegenbauer02_recurrence(lam, levels)
        pair, l = darboux(l0, alpha0)
        state.reports.append(_labelled(factorization_check(l0, pair), label))
        state.reports.append(_labelled(dual_form_check(l0, pair), label))
        state.reports.append(_labelled(intertwine_check(banded_from_bidiag(pair, "beta"), l0, l), label))
    return state

from __future__ import annotations

from fractions import Fraction

import pytest

from src.backend.pipeline.steps import (
    _claims,
    _expect_failure,
    run_ad_conditions,
    run_closed_form,
    run_construction,
    run_darboux_example,
    run_darboux_properties,
    run_printed_example2,
    run_wtilde_matching,
)
from src.backend.pipeline.workflow import build_stages, run_acceptance, summary_frame
from src.shared.schemas import Report, ReportDetail, SuiteState


def checks(state: SuiteState):
    return {r.check: r.passed for r in state.reports}


# =========================
# Helpers
# =========================

def test_claims_lists_only_broken_claims():
    report = _claims("demo", [("a", 1, 1), ("b", 2, 3), ("c", [], [])])
    assert not report.passed
    assert [d.location for d in report.details] == ["b"]
    assert report.details[0].expected == "2" and report.details[0].actual == "3"


def test_expect_failure_inverts():
    failing = Report.build("bispectral", [ReportDetail(location="n=2", expected="0", actual="1")])
    assert _expect_failure("rejected", failing).passed
    assert not _expect_failure("rejected", Report.build("bispectral", [])).passed


def test_build_stages_marks_slow_stages():
    stages = build_stages(quick=True)
    slow = {name for name, _, is_slow in stages if is_slow}
    assert slow == {"example3", "matrix_masses"}
    assert len({name for name, _, _ in stages}) == len(stages)


def test_summary_frame():
    state = SuiteState(reports=[Report.build("a", []), Report.build("b", [ReportDetail(location="x", expected="0", actual="1")])])
    frame = summary_frame(state)
    assert list(frame.columns) == ["check", "pass", "details"]
    assert frame["pass"].tolist() == [True, False]
    assert frame["details"].tolist() == [0, 1]
    assert not state.passed


def test_suite_state_json():
    state = SuiteState(quick=True, reports=[Report.build("a", [])], skipped=["example3"])
    payload = state.to_json_dict()
    assert payload["pass"] is True
    assert payload["complete"] is False
    assert "not checked: example3" in payload["coverage"]
    assert payload["skipped"] == ["example3"]
    assert payload["reports"][0]["pass"] is True


def test_full_suite_state_is_complete():
    state = SuiteState(quick=False, reports=[Report.build("a", [])])
    assert state.complete
    assert state.to_json_dict()["coverage"] == "all claims checked"


# =========================
# Stages
# =========================

def test_closed_form_stage():
    state = run_closed_form(SuiteState(), lambdas=(Fraction(5, 2),), levels=5)
    assert checks(state) == {"gegenbauer02 lambda=5/2:closed_form": True}


def test_darboux_example_stage_without_search():
    state = run_darboux_example(SuiteState(), "example1", search=False)
    assert checks(state) == {"example1:bispectral": True, "example1:eigen_from_operator": True}


def test_printed_example2_stage():
    assert run_printed_example2(SuiteState()).passed


def test_ad_conditions_stage():
    state = run_ad_conditions(SuiteState(), levels=12)
    assert checks(state) == {"example1:ad_condition": True, "example2:ad_condition": True}


def test_construction_stage():
    state = run_construction(SuiteState())
    assert state.passed, [r.details for r in state.reports if not r.passed]
    assert len(state.reports) == 4


def test_wtilde_matching_stage():
    state = run_wtilde_matching(SuiteState(), levels=5)
    assert state.passed, state.reports[0].details


def test_darboux_properties_stage():
    state = run_darboux_properties(SuiteState(), levels=8)
    assert len(state.reports) == 12
    assert state.passed, [r.check for r in state.reports if not r.passed]


# =========================
# Slow
# =========================

@pytest.mark.slow
def test_quick_acceptance_run():
    state = run_acceptance(quick=True)
    assert state.skipped == ["example2:order", "example3", "matrix_masses"]
    assert not state.complete
    assert state.passed, [r.check for r in state.reports if not r.passed]

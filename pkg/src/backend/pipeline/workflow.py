# src/backend/pipeline/workflow.py

from __future__ import annotations

import logging
import time
from functools import partial
from typing import Callable, List, Tuple

import pandas as pd

from src.backend.bispec.search import DEFAULT_N_VERIFY
from src.backend.pipeline.steps import (
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

_logger = logging.getLogger(__name__)

Stage = Callable[[SuiteState], SuiteState]

# Parts of a stage that quick mode leaves out while the rest of it runs.
QUICK_PARTIAL_SKIPS = {"example2": "example2:order"}


def build_stages(*, quick: bool, n_verify: int = DEFAULT_N_VERIFY) -> List[Tuple[str, Stage, bool]]:
    """(name, stage, slow) in run order; slow stages are skipped in quick mode."""
    return [
        ("closed_form", run_closed_form, False),
        ("first_order", partial(run_first_order, n_verify=n_verify), False),
        ("example1", partial(run_darboux_example, name="example1", n_verify=n_verify), False),
        ("example2", partial(run_darboux_example, name="example2", search=not quick, n_verify=n_verify), False),
        ("example2_printed", run_printed_example2, False),
        ("example3", partial(run_example3, n_verify=n_verify), True),
        ("ad_conditions", run_ad_conditions, False),
        ("construction", run_construction, False),
        ("wtilde_matching", run_wtilde_matching, False),
        ("matrix_masses", partial(run_matrix_masses, n_verify=n_verify), True),
        ("jacobi_second_order", partial(run_jacobi_second_order, n_verify=n_verify), False),
        ("koornwinder", partial(run_koornwinder, n_verify=n_verify), False),
        ("weight_properties", run_weight_properties, False),
        ("darboux_properties", run_darboux_properties, False),
    ]


def run_acceptance(*, quick: bool = True, n_verify: int = DEFAULT_N_VERIFY) -> SuiteState:
    """
    Run every acceptance stage in sequence and collect the reports.

    Quick mode skips the order-8 searches (Example 3 and the matrix-mass
    configurations) and the Example 2 order search; everything else runs.
    """
    state = SuiteState(quick=quick)
    for name, stage, slow in build_stages(quick=quick, n_verify=n_verify):
        if slow and quick:
            state.skipped.append(name)
            _logger.info("stage %s skipped (quick)", name)
            continue
        if quick and name in QUICK_PARTIAL_SKIPS:
            state.skipped.append(QUICK_PARTIAL_SKIPS[name])
        before = len(state.reports)
        started = time.perf_counter()
        state = stage(state)
        added = state.reports[before:]
        failed = sum(not r.passed for r in added)
        _logger.info(
            "stage %s: %d reports, %d failing, %.1fs", name, len(added), failed, time.perf_counter() - started
        )
    return state


def summary_frame(state: SuiteState) -> pd.DataFrame:
    """One row per report: check, pass, number of details."""
    return pd.DataFrame(
        [{"check": r.check, "pass": r.passed, "details": len(r.details)} for r in state.reports],
        columns=["check", "pass", "details"],
    )

# src/backend/weights/quadrature.py
# Floating-point oracle for the exact moments. Never used to produce results.

from __future__ import annotations

import logging
from typing import List

import numpy as np
from scipy.integrate import quad

from src.backend.weights.moments import make_family, moments
from src.backend.weights.weight import Weight
from src.shared.schemas import Report, ReportDetail

_logger = logging.getLogger(__name__)

DEFAULT_RTOL = 1e-9


def quadrature_moments(w: Weight, count: int) -> List[np.ndarray]:
    """
    mu_0..mu_{count-1} as float arrays, by adaptive quadrature of the
    scalar core against the algebraic endpoint weight (x-lo)^a (hi-x)^b.

    Normalization follows moments(w, count), so both sequences are
    directly comparable.
    """
    family = make_family(w)
    relative = family.resolve_relative()
    lo, hi = (float(p) for p in family.support)
    exponents = family.alg_exponents()

    core = []
    for k in range(count + 1):
        value, _err = quad(lambda x, k=k: x**k, lo, hi, weight="alg", wvar=exponents, epsabs=1e-14, epsrel=1e-13, limit=200)
        core.append(value)
    if relative:
        core = [c / core[0] for c in core]

    out = []
    for k in range(count):
        block = family.assemble_float(core, k)
        for delta in w.deltas:
            mass = np.array([[float(v) for v in row] for row in delta.mass.rows], dtype=float)
            block = block + float(delta.point) ** k * mass
        out.append(block)
    return out


def quadrature_check(w: Weight, count: int, rtol: float = DEFAULT_RTOL) -> Report:
    """Compare exact and quadrature moments: max|exact - quad| <= rtol * max(1, max|exact|) per k."""
    exact = moments(w, count)
    approx = quadrature_moments(w, count)
    details: List[ReportDetail] = []
    worst = 0.0
    for k, (mu, mu_float) in enumerate(zip(exact.mus, approx)):
        reference = np.array([[float(v) for v in row] for row in mu.rows], dtype=float)
        scale = max(1.0, float(np.max(np.abs(reference))))
        error = float(np.max(np.abs(reference - mu_float))) / scale
        worst = max(worst, error)
        if error > rtol:
            details.append(
                ReportDetail(location=f"mu_{k}", expected=repr(mu), actual=np.array2string(mu_float, precision=15))
            )
    _logger.info("%s quadrature oracle: worst relative error %.3e", w.kind, worst)
    return Report.build(
        "quadrature",
        details,
        counts={"moments": count},
        notes=[f"worst relative error {worst:.3e}"],
    )

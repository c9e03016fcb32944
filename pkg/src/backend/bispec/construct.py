# src/backend/bispec/construct.py

from __future__ import annotations

import logging
from fractions import Fraction
from math import factorial
from typing import List

from src.backend.bispec.diffop import EigenSeq, RightDiffOp
from src.backend.blockop.tridiag import BlockTridiag
from src.backend.exact.matpoly import MatPoly
from src.backend.mop.polys import polys_from_recurrence
from src.shared.errors import InvalidCount, SizeMismatch, WindowExhausted

_logger = logging.getLogger(__name__)


def _shifted_action(l: BlockTridiag, v: List[MatPoly]) -> List[MatPoly]:
    """
    ((L - xI) v)_n = A_n v_{n-1} + (B_n - x) v_n + v_{n+1}; the result is one
    entry shorter since the last entry would need v_{len(v)}.
    """
    out = []
    for n in range(len(v) - 1):
        entry = v[n + 1] + v[n].left_mul(l.b(n)) - v[n].shift(1)
        if n >= 1:
            entry = entry + v[n - 1].left_mul(l.a(n))
        out.append(entry)
    return out


def construct_operator(l: BlockTridiag, lam: EigenSeq, m: int) -> RightDiffOp:
    """
    D = sum_r d^r S_{m-r} / r!  with  S_k = ((L - xI)^(m-k) Lambda P)_0,

    so F_r = ((L - xI)^r Lambda P)_0 / r! and F_0 = S_m = Lambda_0. Valid when
    ad L^(m+1)(Lambda) vanishes; otherwise the degree bound on F_r fails.
    """
    if m < 0:
        raise InvalidCount(f"order must be >= 0, got {m}")
    if lam.block_size != l.block_size:
        raise SizeMismatch("eigenvalues and recurrence must share the block size")
    if l.levels < m + 2:
        raise WindowExhausted(f"order {m} needs {m + 2} levels, operator has {l.levels}")

    family = polys_from_recurrence(l, m + 1)
    vector = [p.left_mul(lam.at(n)) for n, p in enumerate(family.polys)]
    coeffs = [vector[0]]
    for r in range(1, m + 1):
        vector = _shifted_action(l, vector)
        coeffs.append(vector[0].scale(Fraction(1, factorial(r))))
    _logger.info("constructed an order-%d operator from %d levels", m, l.levels)
    return RightDiffOp(l.block_size, tuple(coeffs))

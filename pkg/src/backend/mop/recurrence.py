# src/backend/mop/recurrence.py

from __future__ import annotations

import logging
from typing import List

from src.backend.blockop.tridiag import BlockTridiag
from src.backend.exact.linalg import mat_inverse
from src.backend.exact.matpoly import MatPoly
from src.backend.exact.matrix import MatrixR
from src.backend.mop.polys import inner_product
from src.backend.weights.weight import MomentSeq
from src.shared.errors import DegenerateMoments, InsufficientMoments, InvalidCount, SingularMatrix

_logger = logging.getLogger(__name__)


def _gram_inverse(p: MatPoly, mu: MomentSeq, n: int) -> MatrixR:
    try:
        return mat_inverse(inner_product(p, p, mu))
    except SingularMatrix as exc:
        raise DegenerateMoments(n, f"<P_{n}, P_{n}> is singular") from exc


def recurrence_from_moments(mu: MomentSeq, levels: int) -> BlockTridiag:
    """
    Stieltjes procedure on the block inner product:

        B_n = <x P_n, P_n> <P_n, P_n>^{-1}
        A_n = <x P_n, P_{n-1}> <P_{n-1}, P_{n-1}>^{-1}
        P_{n+1} = x P_n - B_n P_n - A_n P_{n-1}

    Gram blocks only need to be invertible, so quasi-definite weights work.
    """
    if levels < 1:
        raise InvalidCount(f"levels must be >= 1, got {levels}")
    if 2 * levels + 1 > len(mu):
        raise InsufficientMoments(f"{levels} levels need {2 * levels + 1} moments, got {len(mu)}")
    size = mu.block_size
    current = MatPoly.constant(MatrixR.identity(size))
    previous = MatPoly.zero(size)
    previous_gram_inv = MatrixR.zero(size)
    diag: List[MatrixR] = []
    sub: List[MatrixR] = []

    for n in range(levels):
        gram_inv = _gram_inverse(current, mu, n)
        x_current = current.shift(1)
        b = inner_product(x_current, current, mu).matmul(gram_inv)
        diag.append(b)
        nxt = x_current - current.left_mul(b)
        if n >= 1:
            a = inner_product(x_current, previous, mu).matmul(previous_gram_inv)
            try:
                mat_inverse(a)
            except SingularMatrix as exc:
                raise DegenerateMoments(n, f"A_{n} is singular") from exc
            sub.append(a)
            nxt = nxt - previous.left_mul(a)
        _logger.debug("level %d: B_%d=%r", n, n, b)
        previous, current = current, nxt
        previous_gram_inv = gram_inv

    _logger.info("recurrence from %d moments: %d levels", len(mu), levels)
    return BlockTridiag(size, tuple(diag), tuple(sub))

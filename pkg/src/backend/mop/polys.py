# src/backend/mop/polys.py

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import List, Literal, Sequence, Tuple

from src.backend.blockop.tridiag import BlockTridiag
from src.backend.exact.linalg import linsolve
from src.backend.exact.matpoly import MatPoly
from src.backend.exact.matrix import MatrixR
from src.backend.weights.weight import MomentSeq
from src.shared.errors import DegenerateMoments, InsufficientLevels, InsufficientMoments, SingularMatrix
from src.shared.schemas import Report, ReportDetail

_logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class MopFamily:
    """Monic P_0..P_{M-1}; P_0 = I and P_n has leading coefficient I."""

    block_size: int
    polys: Tuple[MatPoly, ...]
    source: Literal["recurrence", "moments"]

    def __len__(self) -> int:
        return len(self.polys)

    def __getitem__(self, n: int) -> MatPoly:
        return self.polys[n]


# =========================
# Inner product
# =========================

def inner_product(p: MatPoly, q: MatPoly, mu: MomentSeq) -> MatrixR:
    """<p, q> = sum_{j,k} p_j mu_{j+k} q_k^T."""
    if p.size != mu.block_size or q.size != mu.block_size:
        raise InsufficientMoments(f"block size {p.size}/{q.size} against moments of size {mu.block_size}")
    if p.degree + q.degree >= len(mu):
        raise InsufficientMoments(f"deg {p.degree} + deg {q.degree} needs more than {len(mu)} moments")
    acc = MatrixR.zero(mu.block_size)
    for j, pj in enumerate(p.coeffs):
        if pj.is_zero():
            continue
        for k, qk in enumerate(q.coeffs):
            if qk.is_zero():
                continue
            acc = acc + pj.matmul(mu[j + k]).matmul(qk.transpose())
    return acc


# =========================
# Generation
# =========================

def polys_from_recurrence(l: BlockTridiag, count: int) -> MopFamily:
    """P_{n+1} = x P_n - B_n P_n - A_n P_{n-1}, with P_{-1} = 0 and P_0 = I."""
    if count > l.levels:
        raise InsufficientLevels(f"{count} polynomials need {count} levels, operator has {l.levels}")
    size = l.block_size
    polys: List[MatPoly] = [MatPoly.constant(MatrixR.identity(size))]
    previous = MatPoly.zero(size)
    for n in range(count - 1):
        current = polys[n]
        nxt = current.shift(1) - current.left_mul(l.b(n))
        if n >= 1:
            nxt = nxt - previous.left_mul(l.a(n))
        previous = current
        polys.append(nxt)
    return MopFamily(size, tuple(polys[:count]), "recurrence")


def _stack(blocks: Sequence[Sequence[MatrixR]]) -> MatrixR:
    rows = []
    for block_row in blocks:
        for i in range(block_row[0].n_rows):
            rows.append(tuple(v for block in block_row for v in block.rows[i]))
    return MatrixR(tuple(rows))


def polys_from_moments(mu: MomentSeq, count: int) -> MopFamily:
    """
    Solve the block Hankel system per degree: P_n = x^n I + sum_{j<n} c_j x^j with

        sum_{j<n} c_j mu_{j+k} = -mu_{n+k},   k = 0..n-1.

    As X H = -R with X = [c_0 .. c_{n-1}], the solve runs on the transposes.
    """
    if 2 * count - 1 > len(mu):
        raise InsufficientMoments(f"{count} polynomials need {2 * count - 1} moments, got {len(mu)}")
    size = mu.block_size
    identity = MatrixR.identity(size)
    polys: List[MatPoly] = [MatPoly.constant(identity)]
    for n in range(1, count):
        hankel_t = _stack([[mu[j + k].transpose() for j in range(n)] for k in range(n)])
        rhs_t = _stack([[-mu[n + k].transpose()] for k in range(n)])
        try:
            solution = linsolve(hankel_t, rhs_t)
        except SingularMatrix as exc:
            raise DegenerateMoments(n) from exc
        coeffs = []
        for j in range(n):
            block_t = MatrixR(solution.rows[j * size : (j + 1) * size])
            coeffs.append(block_t.transpose())
        polys.append(MatPoly(size, tuple(coeffs) + (identity,)))
        _logger.debug("P_%d from a %d x %d Hankel system", n, n * size, n * size)
    return MopFamily(size, tuple(polys), "moments")


# =========================
# Checks
# =========================

def orthogonality_check(family: MopFamily, mu: MomentSeq) -> Report:
    """<P_m, P_n> = 0 for m != n and every P_n monic of degree n."""
    details: List[ReportDetail] = []
    for n, p in enumerate(family.polys):
        if p.degree != n or not p.is_monic():
            details.append(ReportDetail(location=f"P_{n}", expected=f"monic of degree {n}", actual=repr(p.leading())))
    pairs = 0
    for n in range(len(family)):
        for m in range(n):
            pairs += 1
            value = inner_product(family[m], family[n], mu)
            if not value.is_zero():
                details.append(ReportDetail(location=f"<P_{m}, P_{n}>", expected="0", actual=repr(value)))
    return Report.build("orthogonality", details, counts={"polys": len(family), "pairs": pairs})


def families_equal(first: MopFamily, second: MopFamily) -> Report:
    """Coefficientwise equality of two families (path independence)."""
    details: List[ReportDetail] = []
    if len(first) != len(second):
        details.append(ReportDetail(location="length", expected=str(len(first)), actual=str(len(second))))
    for n, (p, q) in enumerate(zip(first.polys, second.polys)):
        if p != q:
            found = (p - q).first_nonzero()
            details.append(ReportDetail(location=f"P_{n} coefficient {found}", expected=repr(p.coeffs), actual=repr(q.coeffs)))
    return Report.build("path_independence", details, counts={"polys": min(len(first), len(second))})

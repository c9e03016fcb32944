# src/backend/blockop/tridiag.py

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import List, Tuple

from src.backend.exact.linalg import mat_inverse
from src.backend.exact.matrix import MatrixR, block_size_of
from src.shared.errors import InsufficientLevels, InvalidCount, SingularMatrix, SingularPivot, SizeMismatch
from src.shared.schemas import Report, ReportDetail

_logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class BlockTridiag:
    """
    K-level truncation of a semi-infinite block tridiagonal operator

        B_0  I
        A_1  B_1  I
             A_2  B_2  I
                  ...

    `diag` holds B_0..B_{K-1}, `sub` holds A_1..A_{K-1}; the superdiagonal is
    fixed to the identity.
    """

    block_size: int
    diag: Tuple[MatrixR, ...]
    sub: Tuple[MatrixR, ...]

    def __post_init__(self) -> None:
        if not self.diag:
            raise InsufficientLevels("a block tridiagonal operator needs at least one level")
        if len(self.sub) != len(self.diag) - 1:
            raise SizeMismatch(f"{len(self.diag)} diagonal blocks need {len(self.diag) - 1} subdiagonal blocks")
        if block_size_of(self.diag + self.sub) != self.block_size:
            raise SizeMismatch(f"blocks are not {self.block_size} x {self.block_size}")

    @classmethod
    def from_blocks(cls, diag: List[MatrixR], sub: List[MatrixR]) -> "BlockTridiag":
        return cls(block_size_of(diag), tuple(diag), tuple(sub))

    @property
    def levels(self) -> int:
        return len(self.diag)

    def b(self, n: int) -> MatrixR:
        return self.diag[n]

    def a(self, n: int) -> MatrixR:
        """A_n for 1 <= n <= K-1."""
        if n < 1:
            raise IndexError("A_n is defined for n >= 1")
        return self.sub[n - 1]

    def truncate(self, levels: int) -> "BlockTridiag":
        if levels < 1:
            raise InvalidCount(f"levels must be >= 1, got {levels}")
        if levels > self.levels:
            raise InsufficientLevels(f"cannot keep {levels} levels of a {self.levels}-level operator")
        return BlockTridiag(self.block_size, self.diag[:levels], self.sub[: levels - 1])


@dataclass(frozen=True)
class BidiagPair:
    """
    Factors of L_0 = alpha * beta:

        alpha = diag(alpha_n) with I above,   beta = I on the diagonal, beta_n below.

    beta_0 is the zero block; it enters only through B~_0 = alpha_0 + beta_0.
    """

    block_size: int
    alphas: Tuple[MatrixR, ...]
    betas: Tuple[MatrixR, ...]

    def __post_init__(self) -> None:
        if len(self.alphas) != len(self.betas) or not self.alphas:
            raise SizeMismatch("alphas and betas must be nonempty and of equal length")
        if block_size_of(self.alphas + self.betas) != self.block_size:
            raise SizeMismatch(f"blocks are not {self.block_size} x {self.block_size}")
        if not self.betas[0].is_zero():
            raise SizeMismatch("beta_0 must be the zero block")

    @property
    def levels(self) -> int:
        return len(self.alphas)


def darboux_factorize(l0: BlockTridiag, alpha0: MatrixR) -> BidiagPair:
    """
    Factor L_0 = alpha * beta with the free parameter alpha_0:

        beta_n  = B_{n-1} - alpha_{n-1}
        alpha_n = A_n beta_n^{-1}           (n >= 1)

    Raises SingularPivot(n) when beta_n is singular.
    """
    if alpha0.shape != (l0.block_size, l0.block_size):
        raise SizeMismatch(f"alpha_0 has shape {alpha0.shape}, expected {l0.block_size} x {l0.block_size}")

    alphas = [alpha0]
    betas = [MatrixR.zero(l0.block_size)]
    for n in range(1, l0.levels):
        beta = l0.b(n - 1) - alphas[n - 1]
        try:
            beta_inv = mat_inverse(beta)
        except SingularMatrix as exc:
            raise SingularPivot(n) from exc
        betas.append(beta)
        alphas.append(l0.a(n).matmul(beta_inv))
    _logger.debug("factorized %d levels with alpha_0=%r", l0.levels, alpha0)
    return BidiagPair(l0.block_size, tuple(alphas), tuple(betas))


def darboux_transform(f: BidiagPair) -> BlockTridiag:
    """
    Reverse the factors, L = beta * alpha:

        B~_n = alpha_n + beta_n      (so B~_0 = alpha_0)
        A~_n = beta_n alpha_{n-1}    (so A~_1 = (B_0 - alpha_0) alpha_0)
    """
    diag = tuple(a + b for a, b in zip(f.alphas, f.betas))
    sub = tuple(f.betas[n].matmul(f.alphas[n - 1]) for n in range(1, f.levels))
    return BlockTridiag(f.block_size, diag, sub)


def darboux(l0: BlockTridiag, alpha0: MatrixR) -> Tuple[BidiagPair, BlockTridiag]:
    pair = darboux_factorize(l0, alpha0)
    return pair, darboux_transform(pair)


def _detail(location: str, expected: MatrixR, actual: MatrixR) -> ReportDetail:
    return ReportDetail(location=location, expected=repr(expected), actual=repr(actual))


def dual_form_check(l0: BlockTridiag, pair: BidiagPair) -> Report:
    """
    Compare darboux_transform with both closed forms of the new blocks:

        B~_n = B_n - beta_{n+1} + beta_n = B_{n-1} - alpha_{n-1} + alpha_n   (1 <= n <= K-2)
        A~_n = beta_n A_{n-1} beta_{n-1}^{-1} = alpha_n^{-1} A_n alpha_{n-1}  (2 <= n <= K-1)

    The alpha form of A~_n is skipped where alpha_n is singular.
    """
    l = darboux_transform(pair)
    details: List[ReportDetail] = []
    skipped = 0
    for n in range(1, l0.levels - 1):
        via_betas = l0.b(n) - pair.betas[n + 1] + pair.betas[n]
        via_alphas = l0.b(n - 1) - pair.alphas[n - 1] + pair.alphas[n]
        if via_betas != l.b(n):
            details.append(_detail(f"B~_{n} beta form", l.b(n), via_betas))
        if via_alphas != l.b(n):
            details.append(_detail(f"B~_{n} alpha form", l.b(n), via_alphas))
    for n in range(2, l0.levels):
        via_betas = pair.betas[n].matmul(l0.a(n - 1)).matmul(mat_inverse(pair.betas[n - 1]))
        if via_betas != l.a(n):
            details.append(_detail(f"A~_{n} beta form", l.a(n), via_betas))
        try:
            alpha_inv = mat_inverse(pair.alphas[n])
        except SingularMatrix:
            skipped += 1
            continue
        via_alphas = alpha_inv.matmul(l0.a(n)).matmul(pair.alphas[n - 1])
        if via_alphas != l.a(n):
            details.append(_detail(f"A~_{n} alpha form", l.a(n), via_alphas))
    return Report.build(
        "dual_forms",
        details,
        levels=l0.levels,
        counts={"alpha_form_skipped": skipped},
    )


def blocks_match_check(expected: BlockTridiag, actual: BlockTridiag, levels: int, check: str = "recurrence_match") -> Report:
    """B_n and A_n of two operators agree for n < levels."""
    if expected.levels < levels or actual.levels < levels:
        raise InsufficientLevels(f"comparison on {levels} levels, operators have {expected.levels} and {actual.levels}")
    details: List[ReportDetail] = []
    for n in range(levels):
        if expected.b(n) != actual.b(n):
            details.append(_detail(f"B_{n}", expected.b(n), actual.b(n)))
        if n >= 1 and expected.a(n) != actual.a(n):
            details.append(_detail(f"A_{n}", expected.a(n), actual.a(n)))
    return Report.build(check, details, levels=levels, counts={"blocks": 2 * levels - 1})

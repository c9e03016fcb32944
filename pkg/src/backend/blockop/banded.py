# src/backend/blockop/banded.py
# Banded block matrices with exact-window bookkeeping: entries (r, c) with
# r, c < exact_window equal the values of the untruncated computation.

from __future__ import annotations

import logging
from dataclasses import dataclass, replace
from typing import Dict, List, Sequence, Tuple

from src.backend.blockop.tridiag import BidiagPair, BlockTridiag
from src.backend.exact.matrix import MatrixR
from src.shared.errors import InvalidCount, SizeMismatch, WindowExhausted
from src.shared.schemas import Report, ReportDetail

_logger = logging.getLogger(__name__)

Index = Tuple[int, int]


@dataclass(frozen=True)
class BandedBlock:
    """
    K x K block matrix with N x N blocks, nonzero only for
    -lower <= col - row <= upper. Missing band entries are zero blocks.
    """

    block_size: int
    levels: int
    lower: int
    upper: int
    blocks: Dict[Index, MatrixR]
    exact_window: int

    def __post_init__(self) -> None:
        if not 0 <= self.exact_window <= self.levels:
            raise SizeMismatch(f"exact window {self.exact_window} outside [0, {self.levels}]")
        for (r, c), block in self.blocks.items():
            if not (0 <= r < self.levels and 0 <= c < self.levels):
                raise SizeMismatch(f"block ({r},{c}) outside {self.levels} levels")
            if not -self.lower <= c - r <= self.upper:
                raise SizeMismatch(f"block ({r},{c}) outside band ({self.lower},{self.upper})")
            if block.shape != (self.block_size, self.block_size):
                raise SizeMismatch(f"block ({r},{c}) has shape {block.shape}")

    def block(self, r: int, c: int) -> MatrixR:
        found = self.blocks.get((r, c))
        return found if found is not None else MatrixR.zero(self.block_size)

    def columns_in_row(self, r: int) -> range:
        return range(max(0, r - self.lower), min(self.levels, r + self.upper + 1))

    def window_entries(self) -> List[Tuple[Index, MatrixR]]:
        """Nonzero entries inside the exact window, in row-major order."""
        w = self.exact_window
        return sorted(((k, v) for k, v in self.blocks.items() if k[0] < w and k[1] < w and not v.is_zero()))

    def is_zero_on_window(self) -> bool:
        return not self.window_entries()


# =========================
# Conversions
# =========================

def banded_from_tridiag(l: BlockTridiag) -> BandedBlock:
    blocks: Dict[Index, MatrixR] = {}
    identity = MatrixR.identity(l.block_size)
    for n in range(l.levels):
        blocks[(n, n)] = l.b(n)
        if n >= 1:
            blocks[(n, n - 1)] = l.a(n)
        if n + 1 < l.levels:
            blocks[(n, n + 1)] = identity
    return BandedBlock(l.block_size, l.levels, 1, 1, blocks, l.levels)


def banded_from_bidiag(pair: BidiagPair, factor: str) -> BandedBlock:
    """`factor` is "alpha" (alpha_n on the diagonal, I above) or "beta" (I on the diagonal, beta_n below)."""
    identity = MatrixR.identity(pair.block_size)
    k = pair.levels
    blocks: Dict[Index, MatrixR] = {}
    if factor == "alpha":
        for n in range(k):
            blocks[(n, n)] = pair.alphas[n]
            if n + 1 < k:
                blocks[(n, n + 1)] = identity
        return BandedBlock(pair.block_size, k, 0, 1, blocks, k)
    if factor == "beta":
        for n in range(k):
            blocks[(n, n)] = identity
            if n >= 1:
                blocks[(n, n - 1)] = pair.betas[n]
        return BandedBlock(pair.block_size, k, 1, 0, blocks, k)
    raise ValueError(f"factor must be 'alpha' or 'beta', got {factor!r}")


def banded_block_diag(diag: Sequence[MatrixR]) -> BandedBlock:
    if not diag:
        raise SizeMismatch("empty block diagonal")
    size = diag[0].n_rows
    blocks = {(n, n): m for n, m in enumerate(diag)}
    return BandedBlock(size, len(diag), 0, 0, blocks, len(diag))


def banded_identity(block_size: int, levels: int) -> BandedBlock:
    return banded_block_diag([MatrixR.identity(block_size)] * levels)


# =========================
# Arithmetic
# =========================

def _check_compatible(x: BandedBlock, y: BandedBlock) -> None:
    if x.block_size != y.block_size or x.levels != y.levels:
        raise SizeMismatch(
            f"banded operands differ: block size {x.block_size}/{y.block_size}, levels {x.levels}/{y.levels}"
        )


def banded_multiply(x: BandedBlock, y: BandedBlock) -> BandedBlock:
    """
    Truncated product. Entry (r, c) sums over k < levels only, so the exact
    window shrinks to min(windows) - min(x.upper, y.lower).
    """
    _check_compatible(x, y)
    blocks: Dict[Index, MatrixR] = {}
    for r in range(x.levels):
        for k in x.columns_in_row(r):
            left = x.blocks.get((r, k))
            if left is None or left.is_zero():
                continue
            for c in y.columns_in_row(k):
                right = y.blocks.get((k, c))
                if right is None:
                    continue
                term = left.matmul(right)
                blocks[(r, c)] = blocks[(r, c)] + term if (r, c) in blocks else term
    window = max(0, min(x.exact_window, y.exact_window) - min(x.upper, y.lower))
    return BandedBlock(x.block_size, x.levels, x.lower + y.lower, x.upper + y.upper, blocks, window)


def banded_subtract(x: BandedBlock, y: BandedBlock) -> BandedBlock:
    _check_compatible(x, y)
    blocks = dict(x.blocks)
    for key, value in y.blocks.items():
        blocks[key] = blocks[key] - value if key in blocks else -value
    return BandedBlock(
        x.block_size,
        x.levels,
        max(x.lower, y.lower),
        max(x.upper, y.upper),
        blocks,
        min(x.exact_window, y.exact_window),
    )


def ad(l: BandedBlock, x: BandedBlock) -> BandedBlock:
    """ad L (X) = L X - X L."""
    return banded_subtract(banded_multiply(l, x), banded_multiply(x, l))


# =========================
# Checks
# =========================

def intertwine_check(u: BandedBlock, l0: BlockTridiag, l: BlockTridiag) -> Report:
    """
    Report whether U L_0 = L U on the exact window. On failure the first
    offending block (row-major) is reported.
    """
    if u.block_size != l0.block_size or l0.block_size != l.block_size:
        raise SizeMismatch("U, L_0 and L must share the block size")
    if not u.levels == l0.levels == l.levels:
        raise SizeMismatch(f"levels differ: U {u.levels}, L_0 {l0.levels}, L {l.levels}")
    diff = banded_subtract(
        banded_multiply(u, banded_from_tridiag(l0)),
        banded_multiply(banded_from_tridiag(l), u),
    )
    details: List[ReportDetail] = []
    offending = diff.window_entries()
    if offending:
        (r, c), block = offending[0]
        details.append(ReportDetail(location=f"block ({r},{c})", expected="0", actual=repr(block)))
    _logger.info("intertwine check on window %d: %s", diff.exact_window, "pass" if not details else "fail")
    return Report.build(
        "intertwine",
        details,
        levels=l0.levels,
        counts={"exact_window": diff.exact_window, "offending_blocks": len(offending)},
    )


def factorization_check(l0: BlockTridiag, pair: BidiagPair) -> Report:
    """alpha * beta reproduces L_0 on the exact window of the product."""
    if pair.levels != l0.levels:
        raise SizeMismatch(f"factors have {pair.levels} levels, L_0 has {l0.levels}")
    product = banded_multiply(banded_from_bidiag(pair, "alpha"), banded_from_bidiag(pair, "beta"))
    diff = banded_subtract(product, banded_from_tridiag(l0))
    details = [
        ReportDetail(location=f"block ({r},{c})", expected="0", actual=repr(block))
        for (r, c), block in diff.window_entries()
    ]
    return Report.build("factorization", details, levels=l0.levels, counts={"exact_window": diff.exact_window})


def ad_bracket_power(l: BlockTridiag, lambda_diag: Sequence[MatrixR], power: int) -> BandedBlock:
    """(ad L)^power (Lambda) with Lambda = diag(lambda_diag); exact on K - power levels."""
    if len(lambda_diag) != l.levels:
        raise SizeMismatch(f"{len(lambda_diag)} eigenvalue blocks for a {l.levels}-level operator")
    if power < 1:
        raise InvalidCount(f"power must be >= 1, got {power}")
    if l.levels <= power:
        raise WindowExhausted(f"{l.levels} levels leave no exact window after {power} brackets")
    lb = banded_from_tridiag(l)
    x = banded_block_diag(list(lambda_diag))
    for step in range(power):
        x = ad(lb, x)
        _logger.debug("bracket %d: window %d, band (%d,%d)", step + 1, x.exact_window, x.lower, x.upper)
    # one level per bracket, even where the product rule above is sharper
    return replace(x, exact_window=min(x.exact_window, l.levels - power))


def ad_condition_check(l: BlockTridiag, lambda_diag: Sequence[MatrixR], power: int) -> Report:
    """(ad L)^power (Lambda) vanishes on its exact window."""
    bracket = ad_bracket_power(l, lambda_diag, power)
    details = [
        ReportDetail(location=f"block ({r},{c})", expected="0", actual=repr(block))
        for (r, c), block in bracket.window_entries()
    ]
    return Report.build(
        "ad_condition",
        details,
        levels=l.levels,
        counts={"power": power, "exact_window": bracket.exact_window},
    )

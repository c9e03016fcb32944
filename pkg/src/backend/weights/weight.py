# src/backend/weights/weight.py

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial
from typing import Literal, Optional, Sequence, Tuple

from src.backend.exact.matrix import MatrixR
from src.backend.exact.rational import RationalLike, as_rational
from src.shared.errors import InexactParameters, InvalidDelta, SizeMismatch


WeightKind = Literal["gegenbauer02", "jacobi", "darboux_gegenbauer02"]
Normalization = Literal["absolute", "relative", "auto"]


@dataclass(frozen=True)
class Delta:
    """Point mass `mass * delta_point`; contributes point^k * mass to the k-th moment."""

    point: Fraction
    mass: MatrixR


@dataclass(frozen=True)
class Weight:
    """
    A matrix weight: one of the density families plus endpoint point masses.

    - gegenbauer02:          ((2-x)x)^(lam-3/2) [[1, x-1], [x-1, 1]] on [0, 2]
    - jacobi:                (1-x)^alpha (1+x)^beta [[1, x], [x, 1]] on [-1, 1]
    - darboux_gegenbauer02:  (2-x)^(lam-3/2) x^(lam-5/2) [[1, x-1], [x-1, 1]] plus the
                             derived mass at 0 (stored in `deltas`)

    With block_size 1 the density matrix collapses to its scalar factor.
    """

    kind: WeightKind
    block_size: int = 2
    lam: Optional[Fraction] = None
    alpha: Optional[Fraction] = None
    beta: Optional[Fraction] = None
    alpha0: Optional[MatrixR] = None
    delta_sign: int = -1
    deltas: Tuple[Delta, ...] = field(default_factory=tuple)
    normalization: Normalization = "auto"


@dataclass(frozen=True)
class MomentSeq:
    """Block moments mu_k = <x^k I, I>; `normalization` records whether a scalar was divided out."""

    block_size: int
    mus: Tuple[MatrixR, ...]
    normalization: Literal["absolute", "relative"]

    def __len__(self) -> int:
        return len(self.mus)

    def __getitem__(self, k: int) -> MatrixR:
        return self.mus[k]


# =========================
# Exact helpers
# =========================

def is_integer(value: Fraction) -> bool:
    return value.denominator == 1


def beta_int(a: int, b: int) -> Fraction:
    """Euler Beta function at positive integers: (a-1)!(b-1)!/(a+b-1)!."""
    if a < 1 or b < 1:
        raise InexactParameters(f"Beta({a}, {b}) needs positive integer arguments")
    return Fraction(factorial(a - 1) * factorial(b - 1), factorial(a + b - 1))


def pow2(exponent: int) -> Fraction:
    return Fraction(2) ** exponent


def make_deltas(block_size: int, deltas: Sequence[Tuple[RationalLike, MatrixR]]) -> Tuple[Delta, ...]:
    out = []
    for point, mass in deltas:
        if mass.shape != (block_size, block_size):
            raise SizeMismatch(f"delta mass of shape {mass.shape} for block size {block_size}")
        if not mass.is_symmetric():
            raise InvalidDelta(f"delta mass at {point} must be symmetric: {mass!r}")
        out.append(Delta(as_rational(point), mass))
    return tuple(out)


# =========================
# Constructors
# =========================

def gegenbauer02_weight(
    lam: RationalLike,
    *,
    block_size: int = 2,
    deltas: Sequence[Tuple[RationalLike, MatrixR]] = (),
    normalization: Normalization = "auto",
) -> Weight:
    return Weight(
        kind="gegenbauer02",
        block_size=block_size,
        lam=as_rational(lam),
        deltas=make_deltas(block_size, deltas),
        normalization=normalization,
    )


def jacobi_weight(
    alpha: RationalLike,
    beta: RationalLike,
    *,
    block_size: int = 2,
    w: MatrixR | None = None,
    v: MatrixR | None = None,
    deltas: Sequence[Tuple[RationalLike, MatrixR]] = (),
    normalization: Normalization = "auto",
) -> Weight:
    """Jacobi-type weight with the mass `w` at 1 and `v` at -1 (either may be omitted)."""
    all_deltas = list(deltas)
    if w is not None:
        all_deltas.append((1, w))
    if v is not None:
        all_deltas.append((-1, v))
    return Weight(
        kind="jacobi",
        block_size=block_size,
        alpha=as_rational(alpha),
        beta=as_rational(beta),
        deltas=make_deltas(block_size, all_deltas),
        normalization=normalization,
    )

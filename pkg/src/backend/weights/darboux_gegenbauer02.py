# src/backend/weights/darboux_gegenbauer02.py

from __future__ import annotations

from fractions import Fraction
from typing import List, Sequence, Tuple

from src.backend.exact.linalg import mat_inverse
from src.backend.exact.matrix import MatrixR
from src.backend.exact.rational import RationalLike, as_rational
from src.backend.weights.base_family import BaseWeightFamily, Number
from src.backend.weights.weight import Delta, Weight, beta_int, is_integer, pow2
from src.shared.errors import AsymmetricAlpha0, InexactParameters, SingularAlpha0, SingularMatrix, SizeMismatch


def _half_index(lam: Fraction) -> int:
    """a = lam - 1/2, an integer >= 2 when 2 lam is odd and >= 5."""
    two_lam = 2 * lam
    if not (is_integer(two_lam) and two_lam.numerator % 2 == 1 and two_lam >= 5):
        raise InexactParameters(f"darboux_gegenbauer02 needs 2*lambda an odd integer >= 5, got lambda = {lam}")
    return int(lam - Fraction(1, 2))


class DarbouxGegenbauer02Family(BaseWeightFamily):
    """
    (2-x)^(lam-3/2) x^(lam-5/2) [[1, x-1], [x-1, 1]] on [0, 2]; the mass at 0
    is carried in weight.deltas by wtilde_weight().

    Scalar core c_k = 2^(k + 2 lam - 3) Beta(k + lam - 3/2, lam - 1/2).
    """

    support = (Fraction(0), Fraction(2))

    def validate(self) -> None:
        if self.weight.lam is None:
            raise InexactParameters("darboux_gegenbauer02 weight needs 'lambda'")
        if self.weight.block_size != 2:
            raise SizeMismatch("darboux_gegenbauer02 weights have block size 2")
        _half_index(self.weight.lam)
        self.check_delta_points()

    def absolute_is_exact(self) -> bool:
        return True

    def scalar_core(self, count: int, relative: bool) -> List[Fraction]:
        a = _half_index(self.weight.lam)  # type: ignore[arg-type]
        core = [pow2(k + 2 * a - 2) * beta_int(k + a - 1, a) for k in range(count)]
        if relative:
            return [c / core[0] for c in core]
        return core

    def off_diagonal(self, core: Sequence[Number], k: int) -> Number:
        return core[k + 1] - core[k]

    def alg_exponents(self) -> Tuple[float, float]:
        lam = float(self.weight.lam)  # type: ignore[arg-type]
        return lam - 2.5, lam - 1.5


def wtilde_delta_mass(lam: Fraction, alpha0: MatrixR, delta_sign: int) -> MatrixR:
    """
    delta_sign * (2^(2 lam) Beta(a, a) / (4 (2 lam - 3))) * ([[2 lam - 2, -1], [-1, 2 lam - 2]] - (2 lam - 3) alpha0^{-1})
    with a = lam - 1/2.
    """
    if delta_sign not in (-1, 1):
        raise ValueError(f"delta_sign must be +1 or -1, got {delta_sign}")
    a = _half_index(lam)
    if alpha0.shape != (2, 2):
        raise SizeMismatch(f"alpha_0 has shape {alpha0.shape}, expected 2 x 2")
    if not alpha0.is_symmetric():
        raise AsymmetricAlpha0(f"alpha_0 must be symmetric for a symmetric point mass: {alpha0!r}")
    try:
        alpha0_inv = mat_inverse(alpha0)
    except SingularMatrix as exc:
        raise SingularAlpha0(f"alpha_0 is singular: {alpha0!r}") from exc

    coefficient = pow2(2 * a + 1) * beta_int(a, a) / (4 * (2 * lam - 3))
    base = MatrixR.from_rows([[2 * lam - 2, -1], [-1, 2 * lam - 2]])
    return (base - alpha0_inv.scale(2 * lam - 3)).scale(delta_sign * coefficient)


def wtilde_weight(lam: RationalLike, alpha0: MatrixR, delta_sign: int = -1) -> Weight:
    """Weight of the Darboux-transformed gegenbauer02 family; always absolute."""
    lam = as_rational(lam)
    mass = wtilde_delta_mass(lam, alpha0, delta_sign)
    return Weight(
        kind="darboux_gegenbauer02",
        block_size=2,
        lam=lam,
        alpha0=alpha0,
        delta_sign=delta_sign,
        deltas=(Delta(Fraction(0), mass),),
        normalization="absolute",
    )

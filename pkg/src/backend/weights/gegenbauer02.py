# src/backend/weights/gegenbauer02.py

from __future__ import annotations

from fractions import Fraction
from typing import List, Sequence, Tuple

from src.backend.blockop.tridiag import BlockTridiag
from src.backend.exact.matrix import MatrixR
from src.backend.weights.base_family import BaseWeightFamily, Number
from src.backend.weights.weight import beta_int, is_integer, pow2
from src.shared.errors import InexactParameters, SizeMismatch

HALF = Fraction(1, 2)


class Gegenbauer02Family(BaseWeightFamily):
    """
    ((2-x)x)^(lam-3/2) [[1, x-1], [x-1, 1]] on [0, 2].

    Scalar core I_k = int x^k ((2-x)x)^(lam-3/2) dx obeys
        I_{k+1} = I_k * 2(k + lam - 1/2) / (k + 2 lam - 1),
        I_0 = 2^(2 lam - 2) Beta(lam - 1/2, lam - 1/2),
    and mu_k = [[I_k, I_{k+1} - I_k], [I_{k+1} - I_k, I_k]].
    """

    support = (Fraction(0), Fraction(2))

    @property
    def lam(self) -> Fraction:
        return self.weight.lam  # type: ignore[return-value]

    def validate(self) -> None:
        if self.weight.lam is None:
            raise InexactParameters("gegenbauer02 weight needs 'lambda'")
        if self.lam <= HALF:
            raise InexactParameters(f"lambda = {self.lam} must exceed 1/2 for an integrable density")
        if self.weight.block_size not in (1, 2):
            raise SizeMismatch("gegenbauer02 weights have block size 2 (or 1 for the scalar factor)")
        self.check_delta_points()

    def absolute_is_exact(self) -> bool:
        two_lam = 2 * self.lam
        return is_integer(two_lam) and two_lam.numerator % 2 == 1 and two_lam >= 3

    def scalar_core(self, count: int, relative: bool) -> List[Fraction]:
        if relative:
            first = Fraction(1)
        else:
            a = int(self.lam - HALF)
            first = pow2(2 * a - 1) * beta_int(a, a)
        core = [first]
        for k in range(count - 1):
            core.append(core[k] * 2 * (k + self.lam - HALF) / (k + 2 * self.lam - 1))
        return core

    def off_diagonal(self, core: Sequence[Number], k: int) -> Number:
        return core[k + 1] - core[k]

    def alg_exponents(self) -> Tuple[float, float]:
        e = float(self.lam - Fraction(3, 2))
        return e, e


def gegenbauer02_recurrence(lam: Fraction, levels: int) -> BlockTridiag:
    """
    Closed-form blocks of the monic recurrence for the gegenbauer02 weight:

        B_n = (lam - 1) / (2 (n + lam)(n + lam - 1)) S + I
        A_n = n (n + 2 lam - 2) / (4 (n + lam - 1)^2) I
    """
    lam = Fraction(lam)
    s = MatrixR.from_rows([[0, 1], [1, 0]])
    identity = MatrixR.identity(2)
    diag = [s.scale((lam - 1) / (2 * (n + lam) * (n + lam - 1))) + identity for n in range(levels)]
    sub = [identity.scale(Fraction(n * (n + 2 * lam - 2)) / (4 * (n + lam - 1) ** 2)) for n in range(1, levels)]
    return BlockTridiag(2, tuple(diag), tuple(sub))

# src/backend/weights/jacobi.py

from __future__ import annotations

from fractions import Fraction
from math import comb
from typing import List, Sequence, Tuple

from src.backend.weights.base_family import BaseWeightFamily, Number
from src.backend.weights.weight import beta_int, is_integer, pow2
from src.shared.errors import InexactParameters, SizeMismatch


class JacobiFamily(BaseWeightFamily):
    """
    (1-x)^alpha (1+x)^beta [[1, x], [x, 1]] on [-1, 1], plus endpoint masses.

    With n_j = int (1-x)^alpha (1+x)^(beta+j) dx,
        n_{j+1} = n_j * 2(beta + j + 1) / (alpha + beta + j + 2),
        m_k = sum_j C(k, j) (-1)^(k-j) n_j,
    and mu_k = [[m_k, m_{k+1}], [m_{k+1}, m_k]].
    """

    support = (Fraction(-1), Fraction(1))

    @property
    def alpha(self) -> Fraction:
        return self.weight.alpha  # type: ignore[return-value]

    @property
    def beta(self) -> Fraction:
        return self.weight.beta  # type: ignore[return-value]

    def validate(self) -> None:
        if self.weight.alpha is None or self.weight.beta is None:
            raise InexactParameters("jacobi weight needs 'alpha' and 'beta'")
        if self.alpha <= -1 or self.beta <= -1:
            raise InexactParameters(f"alpha = {self.alpha}, beta = {self.beta} must both exceed -1")
        if self.weight.block_size not in (1, 2):
            raise SizeMismatch("jacobi weights have block size 2 (or 1 for the scalar factor)")
        self.check_delta_points()

    def absolute_is_exact(self) -> bool:
        return is_integer(self.alpha) and is_integer(self.beta) and self.alpha >= 0 and self.beta >= 0

    def scalar_core(self, count: int, relative: bool) -> List[Fraction]:
        if relative:
            n = [Fraction(1)]
        else:
            a, b = int(self.alpha), int(self.beta)
            n = [pow2(a + b + 1) * beta_int(a + 1, b + 1)]
        for j in range(count - 1):
            n.append(n[j] * 2 * (self.beta + j + 1) / (self.alpha + self.beta + j + 2))
        return [
            sum((comb(k, j) * (-1) ** (k - j) * n[j] for j in range(k + 1)), Fraction(0))
            for k in range(count)
        ]

    def off_diagonal(self, core: Sequence[Number], k: int) -> Number:
        return core[k + 1]

    def alg_exponents(self) -> Tuple[float, float]:
        # (x + 1)^beta (1 - x)^alpha
        return float(self.beta), float(self.alpha)

# src/backend/weights/base_family.py

from __future__ import annotations

from abc import ABC, abstractmethod
from fractions import Fraction
from typing import List, Sequence, Tuple, TypeVar

import numpy as np

from src.backend.exact.matrix import MatrixR
from src.backend.weights.weight import Weight
from src.shared.errors import InexactParameters, InvalidDelta

Number = TypeVar("Number", Fraction, float)


class BaseWeightFamily(ABC):
    """
    Unified interface for the density families.

    Concrete implementations:
      - Gegenbauer02Family        (src/backend/weights/gegenbauer02.py)
      - JacobiFamily              (src/backend/weights/jacobi.py)
      - DarbouxGegenbauer02Family (src/backend/weights/darboux_gegenbauer02.py)

    Each family knows its scalar moment core c_k = int x^k rho(x) dx and how
    the 2x2 density matrix turns the core into block moments. The moments()
    function depends only on this interface.
    """

    support: Tuple[Fraction, Fraction]

    def __init__(self, weight: Weight) -> None:
        self.weight = weight
        self.validate()

    @abstractmethod
    def validate(self) -> None:
        """Reject parameters for which the density is not integrable."""
        raise NotImplementedError

    @abstractmethod
    def absolute_is_exact(self) -> bool:
        """True when the unnormalized moments are rational."""
        raise NotImplementedError

    @abstractmethod
    def scalar_core(self, count: int, relative: bool) -> List[Fraction]:
        """c_0..c_{count-1}; in relative mode c_0 = 1."""
        raise NotImplementedError

    @abstractmethod
    def off_diagonal(self, core: Sequence[Number], k: int) -> Number:
        """Off-diagonal entry of the density part of mu_k; the diagonal is core[k]."""
        raise NotImplementedError

    @abstractmethod
    def alg_exponents(self) -> Tuple[float, float]:
        """(a, b) such that rho(x) = (x - lo)^a (hi - x)^b, for the quadrature oracle."""
        raise NotImplementedError

    def resolve_relative(self) -> bool:
        """
        Pick the normalization. Relative mode divides out c_0 and is refused
        when point masses are present, since their ratio to the density is
        then not scale-free.
        """
        mode = self.weight.normalization
        if mode == "absolute":
            if not self.absolute_is_exact():
                raise InexactParameters(f"{self.weight.kind}: absolute moments are not rational for these parameters")
            return False
        if mode == "auto" and self.absolute_is_exact():
            return False
        if self.weight.deltas:
            raise InexactParameters(
                f"{self.weight.kind}: point masses need absolute moments, which are not rational here"
            )
        return True

    def assemble(self, core: Sequence[Fraction], k: int) -> MatrixR:
        """Density part of mu_k from the scalar core."""
        return two_by_two(self.weight.block_size, core[k], self.off_diagonal(core, k))

    def assemble_float(self, core: Sequence[float], k: int) -> np.ndarray:
        d, o = core[k], self.off_diagonal(core, k)
        if self.weight.block_size == 1:
            return np.array([[d]], dtype=float)
        return np.array([[d, o], [o, d]], dtype=float)

    def check_delta_points(self) -> None:
        lo, hi = self.support
        for delta in self.weight.deltas:
            if not lo <= delta.point <= hi:
                raise InvalidDelta(f"delta at {delta.point} lies outside the support [{lo}, {hi}]")


def two_by_two(block_size: int, diagonal: Fraction, off_diagonal: Fraction) -> MatrixR:
    """[[d, o], [o, d]], or [[d]] for scalar weights."""
    if block_size == 1:
        return MatrixR(((diagonal,),))
    return MatrixR(((diagonal, off_diagonal), (off_diagonal, diagonal)))

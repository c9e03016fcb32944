# src/backend/exact/polyn.py

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import List, Sequence, Tuple

from src.backend.exact.rational import RationalLike, as_rational, format_rational


@dataclass(frozen=True)
class PolyN:
    """
    Rational polynomial in the integer variable n; coeffs[k] multiplies n^k.
    Used for the entries of symbolic eigenvalue sequences.
    """

    coeffs: Tuple[Fraction, ...]

    def __post_init__(self) -> None:
        end = len(self.coeffs)
        while end > 0 and self.coeffs[end - 1] == 0:
            end -= 1
        if end != len(self.coeffs):
            object.__setattr__(self, "coeffs", self.coeffs[:end])

    @classmethod
    def of(cls, *coeffs: RationalLike) -> "PolyN":
        """PolyN.of(c0, c1, ...) = c0 + c1 n + ..."""
        return cls(tuple(as_rational(c) for c in coeffs))

    @classmethod
    def constant(cls, value: RationalLike) -> "PolyN":
        return cls.of(value)

    @classmethod
    def n(cls) -> "PolyN":
        return cls.of(0, 1)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def evaluate(self, n: RationalLike) -> Fraction:
        value = as_rational(n)
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * value + c
        return acc

    def _coefficient(self, k: int) -> Fraction:
        return self.coeffs[k] if k < len(self.coeffs) else Fraction(0)

    def __add__(self, other: object) -> "PolyN":
        other = _lift(other)
        if other is None:
            return NotImplemented
        n = max(len(self.coeffs), len(other.coeffs))
        return PolyN(tuple(self._coefficient(k) + other._coefficient(k) for k in range(n)))

    __radd__ = __add__

    def __neg__(self) -> "PolyN":
        return PolyN(tuple(-c for c in self.coeffs))

    def __sub__(self, other: object) -> "PolyN":
        other = _lift(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other: object) -> "PolyN":
        other = _lift(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other: object) -> "PolyN":
        other = _lift(other)
        if other is None:
            return NotImplemented
        if self.is_zero() or other.is_zero():
            return PolyN(())
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return PolyN(tuple(out))

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> "PolyN":
        acc = PolyN.of(1)
        for _ in range(exponent):
            acc = acc * self
        return acc

    def to_json(self) -> List[str]:
        return [format_rational(c) for c in self.coeffs]


def _lift(value: object) -> PolyN | None:
    if isinstance(value, PolyN):
        return value
    if isinstance(value, (int, Fraction)) and not isinstance(value, bool):
        return PolyN.of(value)
    return None


def polyn_from_json(values: Sequence[str]) -> PolyN:
    return PolyN(tuple(as_rational(v) for v in values))

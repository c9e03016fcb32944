# src/backend/exact/rational.py

from __future__ import annotations

import re
from fractions import Fraction
from typing import Union

# Fraction already keeps the canonical form: reduced, positive denominator, 0 == 0/1.
Rational = Fraction

RationalLike = Union[Fraction, int, str]

_RATIONAL_PATTERN = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*(\d+)\s*)?$")


def parse_rational(text: str) -> Fraction:
    """
    Parse "p/q" or "p" into a Fraction.

    Decimal and float notations are rejected so that every constant read from
    a file is exact.
    """
    match = _RATIONAL_PATTERN.match(text)
    if match is None:
        raise ValueError(f"not a rational literal: {text!r} (expected 'p/q' or 'p')")
    numerator = int(match.group(1))
    denominator = int(match.group(2)) if match.group(2) is not None else 1
    if denominator == 0:
        raise ValueError(f"zero denominator in {text!r}")
    return Fraction(numerator, denominator)


def as_rational(value: RationalLike) -> Fraction:
    """Coerce an int, Fraction or rational literal to a Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return parse_rational(value)
    raise TypeError(f"cannot use {type(value).__name__} as an exact rational")


def format_rational(value: Fraction) -> str:
    """Canonical string: "p" when the denominator is 1, "p/q" otherwise."""
    value = as_rational(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"

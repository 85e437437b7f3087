"""Exact integer and rational primitives.

Python ints are unbounded and ``fractions.Fraction`` normalizes to lowest
terms with a positive denominator, so they serve directly as the BigInt and
BigRat types. This module adds the combinatorial helpers and the string
encodings used when emitting tables.
"""
from __future__ import annotations

import math
from fractions import Fraction

BigInt = int
BigRat = Fraction

__all__ = [
    "BigInt",
    "BigRat",
    "factorial",
    "binomial",
    "int_to_str",
    "int_from_str",
    "rat_to_str",
    "rat_from_str",
]


def factorial(n: int) -> int:
    if n < 0:
        raise ValueError(f"factorial needs n >= 0, got {n}")
    return math.factorial(n)


def binomial(n: int, k: int) -> int:
    """C(n, k), with 0 outside 0 <= k <= n."""
    if n < 0:
        raise ValueError(f"binomial needs n >= 0, got {n}")
    if k < 0 or k > n:
        return 0
    return math.comb(n, k)


def int_to_str(value: int) -> str:
    return str(int(value))


def int_from_str(text: str) -> int:
    text = text.strip()
    if not text.lstrip("+-").isdigit():
        raise ValueError(f"not a decimal integer: {text!r}")
    return int(text)


def rat_to_str(value: Fraction) -> str:
    """Encode as ``"num/den"`` (``"num"`` alone is never produced)."""
    value = Fraction(value)
    return f"{value.numerator}/{value.denominator}"


def rat_from_str(text: str) -> Fraction:
    num, sep, den = text.strip().partition("/")
    if not sep:
        return Fraction(int_from_str(num))
    d = int_from_str(den)
    if d == 0:
        raise ZeroDivisionError(f"zero denominator in {text!r}")
    return Fraction(int_from_str(num), d)

"""Exact rational scalars and their string form used in all JSON interfaces."""

from __future__ import annotations

import re
from fractions import Fraction

_RAT_RE = re.compile(r"^-?\d+(/[1-9]\d*)?$")


def rat(value) -> Fraction:
    """Coerce ints, Fractions and strings like "3", "-1/2" to a Fraction.

    Floats are rejected: the kernel is exact and a float almost always
    indicates an upstream mistake.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        s = value.strip()
        if not _RAT_RE.match(s):
            raise ValueError(f"not a rational literal: {value!r}")
        return Fraction(s)
    raise TypeError(f"cannot interpret {type(value).__name__} as an exact rational")


def rat_str(x: Fraction) -> str:
    """Serialize a rational as "n" or "n/d" (bit-exact round-trip with rat)."""
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"

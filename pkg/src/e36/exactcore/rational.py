"""Exact scalars.  ``fractions.Fraction`` is the rational type throughout."""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Tuple

HALF = Fraction(1, 2)


def q(x) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings to a Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        raise TypeError("floating point values are not accepted")
    return Fraction(x)


def rational_to_json(x) -> dict:
    x = q(x)
    return {"num": str(x.numerator), "den": str(x.denominator)}


def rational_from_json(d: dict) -> Fraction:
    return Fraction(int(d["num"]), int(d["den"]))


def is_half_integral(x) -> bool:
    return q(x).denominator in (1, 2)


def half_int_vector(entries: Iterable) -> Tuple[Fraction, ...]:
    """Validate and freeze a vector with entries in (1/2)Z."""
    v = tuple(q(x) for x in entries)
    bad = [x for x in v if not is_half_integral(x)]
    if bad:
        raise ValueError(f"entries {bad} are not half-integers")
    return v


def rising(x, n: int) -> Fraction:
    """``(x+1)(x+2)...(x+n)``: the factor a box operator puts on a coefficient."""
    out = Fraction(1)
    for j in range(1, n + 1):
        out *= x + j
    return out


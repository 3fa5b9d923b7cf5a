"""Round-half-up arithmetic used everywhere numbers are reported.

Python's round() is banker's rounding; grading and survey statistics need
deterministic half-up behaviour (4.45 -> 4.5, not 4.4), computed exactly so
float representation never flips a boundary case.
"""

from __future__ import annotations

from decimal import ROUND_HALF_UP, Decimal
from fractions import Fraction
from numbers import Rational


def round_half_up(value, ndigits: int = 0) -> float:
    """Round to `ndigits` decimals with ties going away from zero (toward +inf
    for positives). Accepts ints, floats, and Fractions; Fractions are rounded
    exactly."""
    if isinstance(value, Rational):
        dec = Decimal(value.numerator) / Decimal(value.denominator)
    else:
        dec = Decimal(str(value))
    quantum = Decimal(1).scaleb(-ndigits)
    result = dec.quantize(quantum, rounding=ROUND_HALF_UP)
    return float(result)


def round_half_up_int(value) -> int:
    return int(round_half_up(value, 0))


def mean_fraction(values) -> Fraction:
    """Exact arithmetic mean as a Fraction."""
    values = list(values)
    if not values:
        raise ValueError("mean of empty sequence")
    return Fraction(sum(Fraction(v) for v in values), len(values))

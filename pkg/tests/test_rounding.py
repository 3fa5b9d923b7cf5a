from decimal import ROUND_HALF_UP, Decimal
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from gamelearn.rounding import mean_fraction, round_half_up, round_half_up_int


def test_ties_go_up_not_to_even():
    assert round_half_up(4.45, 1) == 4.5
    assert round_half_up(4.35, 1) == 4.4  # 4.35 is a true tie only in decimal
    assert round_half_up(Fraction(87, 20), 1) == 4.4  # 4.35 exactly
    assert round_half_up(Fraction(89, 20), 1) == 4.5  # 4.45 exactly
    assert round_half_up(2.5) == 3.0
    assert round_half_up(3.5) == 4.0  # banker's rounding would give 4.0 too; 2.5 is the tell


def test_integer_rounding():
    assert round_half_up_int(Fraction(100 * 2, 14)) == 14
    assert round_half_up_int(0.5) == 1
    assert round_half_up_int(13.49) == 13


def test_fraction_exactness_beats_float_repr():
    # 100*23/37 = 62.162...; a float detour is fine here, but 4.45-style
    # boundaries must not flip due to binary representation
    assert round_half_up(Fraction(2312, 1000), 2) == 2.31
    assert round_half_up(Fraction(100 * 23, 37), 1) == 62.2


def test_mean_fraction():
    assert mean_fraction([1, 2, 3]) == Fraction(2)
    assert mean_fraction([Fraction(1, 3), Fraction(2, 3)]) == Fraction(1, 2)
    with pytest.raises(ValueError):
        mean_fraction([])


@given(st.fractions(min_value=0, max_value=100), st.integers(min_value=0, max_value=3))
def test_matches_decimal_half_up(value, ndigits):
    expected = float(
        (Decimal(value.numerator) / Decimal(value.denominator)).quantize(
            Decimal(1).scaleb(-ndigits), rounding=ROUND_HALF_UP
        )
    )
    assert round_half_up(value, ndigits) == expected

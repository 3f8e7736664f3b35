import random
from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from roundtaylor.exact import (GridSpec, TEN_DECIMALS, decimal_preview, floor_rational,
                               format_rational, on_grid, parse_rational, round_to_grid,
                               round_vector_to_grid)
from roundtaylor.reference import TABLE_T1, TABLE_T2

rationals = st.fractions(max_denominator=10**15)


@pytest.mark.parametrize("x, want", [(F(10, 3), 3), (F(-1, 3), -1), (F(7), 7), (F(-6, 3), -2)])
def test_floor_examples(x, want):
    assert floor_rational(x) == want


@pytest.mark.parametrize("y, want", [
    (F(1, 3), F(3333333333, 10**10)),
    (F(7849465573, 10**10), F(7849465573, 10**10)),
    (F(-1, 3), F(-3333333334, 10**10)),
])
def test_round_examples(y, want):
    assert round_to_grid(y, TEN_DECIMALS) == want


def test_round_vector_examples():
    third = F(3333333333, 10**10)
    assert round_vector_to_grid((F(1, 3),) * 3, TEN_DECIMALS) == (third,) * 3
    assert round_vector_to_grid((F(0), F(-1, 3), F(1, 2)), TEN_DECIMALS) == (
        F(0), F(-3333333334, 10**10), F(1, 2))
    on = (F(1, 4), F(-3, 10), F(7849465573, 10**10))
    assert round_vector_to_grid(on, TEN_DECIMALS) == on


def test_grid_spec_rejects_negative():
    with pytest.raises(ValueError):
        GridSpec(F(-1, 10))


def test_zero_resolution_is_not_a_rounding_grid():
    g = GridSpec(F(0))
    assert not g.rounds
    with pytest.raises(ValueError):
        round_to_grid(F(1, 3), g)


@given(rationals)
def test_floor_bracket(x):
    n = floor_rational(x)
    assert n <= x < n + 1


@given(rationals, st.sampled_from([F(1, 10**10), F(1, 7), F(3, 2), F(1)]))
def test_round_properties(y, R):
    g = GridSpec(R)
    z = round_to_grid(y, g)
    assert 0 <= y - z < R
    assert on_grid(z, g)
    assert round_to_grid(z, g) == z


@given(st.lists(rationals, min_size=1, max_size=6))
def test_vector_error_below_resolution(ys):
    zs = round_vector_to_grid(ys, TEN_DECIMALS)
    assert all(0 <= y - z < TEN_DECIMALS.resolution for y, z in zip(ys, zs))


@given(rationals, rationals)
def test_canonical_form(a, b):
    for v in (a + b, a - b, a * b) + ((a / b,) if b else ()):
        assert v.denominator > 0
        from math import gcd
        assert gcd(abs(v.numerator), v.denominator) == 1


def test_random_rationals_sweep():
    rng = random.Random(20240611)
    R = F(1, 10**10)
    g = GridSpec(R)
    for _ in range(10**5):
        y = F(rng.randint(-10**16, 10**16), rng.randint(1, 10**12))
        z = round_to_grid(y, g)
        assert 0 <= y - z < R
        assert round_to_grid(z, g) == z


def test_table_denominators_divide_grid():
    for row in TABLE_T1 + TABLE_T2:
        for x in row:
            assert (10**10) % parse_rational(x).denominator == 0


@pytest.mark.parametrize("text, want", [
    ("3966/10000", F(3966, 10000)), ("0.3966", F(3966, 10000)), ("-7", F(-7)),
    ("1e-10", F(1, 10**10)), (" 1 / 3 ", F(1, 3)),
])
def test_parse(text, want):
    assert parse_rational(text) == want


@pytest.mark.parametrize("text", ["abc", "1/0", "inf", "nan", ""])
def test_parse_rejects(text):
    with pytest.raises(ValueError):
        parse_rational(text)


@given(rationals)
def test_format_roundtrip(x):
    assert parse_rational(format_rational(x)) == x


def test_decimal_preview_truncates():
    assert decimal_preview(F(2, 3), 4) == "0.6666"
    assert decimal_preview(F(-1, 8), 2) == "-0.12"
    assert decimal_preview(F(5), 0) == "5"

from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from virmod.scalars import ONE, ZERO, I, GaussianRational, gr, gr_arith, gr_format, gr_parse

fractions = st.fractions(max_denominator=50).filter(lambda q: abs(q.numerator) < 10**6)
gaussians = st.builds(GaussianRational, fractions, fractions)
nonzero = gaussians.filter(bool)


def as_pair(x):
    return (x.re, x.im)


@pytest.mark.parametrize(
    "text, expected",
    [
        ("5/6", (Fraction(5, 6), 0)),
        ("-1/2+3/4i", (Fraction(-1, 2), Fraction(3, 4))),
        ("2/4", (Fraction(1, 2), 0)),
        ("-1/3i", (0, Fraction(-1, 3))),
        ("0", (0, 0)),
        ("7-2i", (7, -2)),
    ],
)
def test_parse_examples(text, expected):
    assert as_pair(gr_parse(text)) == expected


@pytest.mark.parametrize(
    "value, text",
    [(GaussianRational(Fraction(1, 2)), "1/2"), (ZERO, "0"), (GaussianRational(0, Fraction(-1, 3)), "-1/3i"),
     (GaussianRational(Fraction(1, 2), Fraction(-1, 2)), "1/2-1/2i"), (I, "1i")],
)
def test_format_examples(value, text):
    assert gr_format(value) == text


@pytest.mark.parametrize("text", ["", "i", "1.5", "1/2 i", "1/-2", "abc", "1+2", "1/2+i"])
def test_parse_rejects_malformed(text):
    with pytest.raises(ValueError):
        gr_parse(text)


def test_parse_rejects_zero_denominator():
    with pytest.raises(ZeroDivisionError):
        gr_parse("3/0")


def test_division_by_zero():
    with pytest.raises(ZeroDivisionError):
        gr_arith("div", ONE, ZERO)
    with pytest.raises(ZeroDivisionError):
        ZERO.inverse()


def test_unknown_operation():
    with pytest.raises(ValueError):
        gr_arith("pow", ONE, ONE)


def test_i_squared():
    assert I * I == gr(-1)
    assert gr(1j) == I


def test_integrality():
    assert gr(3).is_integer() and gr(-2).is_integer()
    assert not gr_parse("1/2").is_integer()
    assert not gr_parse("3+1i").is_integer()


@given(gaussians)
def test_round_trip(x):
    assert gr_parse(gr_format(x)) == x


@given(gaussians, gaussians, gaussians)
def test_field_axioms(x, y, z):
    assert (x + y) + z == x + (y + z)
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z
    assert x * y == y * x
    assert x - x == ZERO


@given(nonzero)
def test_inverse(x):
    assert x * x.inverse() == ONE
    assert gr_arith("div", ONE, x) == x.inverse()


@given(gaussians, gaussians)
def test_arith_against_pair_formulas(x, y):
    # independent oracle: multiplication written out on (re, im) pairs
    a, b = as_pair(x)
    c, d = as_pair(y)
    assert as_pair(gr_arith("add", x, y)) == (a + c, b + d)
    assert as_pair(gr_arith("sub", x, y)) == (a - c, b - d)
    assert as_pair(gr_arith("mul", x, y)) == (a * c - b * d, a * d + b * c)
    if y:
        n = c * c + d * d
        assert as_pair(gr_arith("div", x, y)) == ((a * c + b * d) / n, (b * c - a * d) / n)


@settings(max_examples=50)
@given(gaussians)
def test_hash_consistent_with_equality(x):
    y = gr_parse(gr_format(x))
    assert hash(x) == hash(y)
    if not x.im:
        assert x == x.re

from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from contexture.scalar import (
    SQRT2,
    Lex,
    QuadRat,
    compare,
    format_scalar,
    parse_scalar,
    sign,
    sqrt2,
    to_decimal,
    to_scalar,
)

fracs = st.fractions(min_value=-50, max_value=50, max_denominator=40)
quads = st.builds(QuadRat, fracs, fracs)


def test_rational_arithmetic():
    assert F(1, 3) + F(1, 6) == F(1, 2)
    assert (1 + SQRT2) * (1 - SQRT2) == -1
    assert SQRT2**2 == 2
    assert isinstance(SQRT2 * SQRT2, (QuadRat, F))


def test_compare_examples():
    assert compare(SQRT2 / 2, F(7, 10)) == "greater"
    assert compare((3 - SQRT2) / 2, F(4, 5)) == "less"
    assert compare(F(1, 2), QuadRat(F(1, 2), 0)) == "equal"


def _sign_oracle(a: F, b: F) -> int:
    # sign of a + b*sqrt2 from integer squares only
    if b == 0:
        return (a > 0) - (a < 0)
    if a == 0:
        return (b > 0) - (b < 0)
    if (a > 0) == (b > 0):
        return 1 if a > 0 else -1
    lhs, rhs = a * a, 2 * b * b
    if lhs == rhs:
        return 0
    dominant = a if lhs > rhs else b
    return 1 if dominant > 0 else -1


@given(fracs, fracs)
def test_sign_matches_integer_oracle(a, b):
    assert sign(QuadRat(a, b)) == _sign_oracle(a, b)


@given(quads, quads)
def test_field_axioms(x, y):
    assert x + y - y == x
    if y != 0:
        assert (x * y) / y == x
    assert (x * y).conjugate() == x.conjugate() * y.conjugate()
    assert [x < y, x == y, x > y].count(True) == 1


@given(quads)
def test_format_round_trip(x):
    assert parse_scalar(format_scalar(x)) == x


def test_parse_forms():
    assert parse_scalar("3/4") == F(3, 4)
    assert parse_scalar("sqrt2") == SQRT2
    assert parse_scalar("1/2 - 1/4*sqrt2") == QuadRat(F(1, 2), F(-1, 4))
    with pytest.raises(ValueError):
        parse_scalar("1/2 + pi")


def test_to_scalar_rejects_floats():
    with pytest.raises(TypeError):
        to_scalar(0.5)
    assert to_scalar("2/3") == F(2, 3)


def test_decimal_rendering():
    assert to_decimal(SQRT2, 6) == "1.414214"
    assert to_decimal(0) == "0.000000000000"
    assert to_decimal(F(-1, 3), 3) == "-0.333"


def test_rational_stand_in():
    assert sqrt2() == SQRT2
    assert sqrt2(F(99, 70)) == F(99, 70)


def test_lex_order():
    assert Lex(1, -1) < Lex(1) < Lex(1, 1) < Lex(F(11, 10), -5)
    assert Lex(1, -1) + Lex(0, 1) == Lex(1)
    assert Lex(1, -1) <= 1
    assert not Lex(1, 1) <= 1

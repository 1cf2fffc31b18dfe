import math

import pytest

from loggas.scalars import (
    SCALE_FLOATS,
    ScaleMismatchError,
    Tagged,
    as_float,
    format_rational,
    rational,
    scalar_is_zero,
    scalar_json,
    tagged,
)


def test_rational_parsing():
    assert rational("3/4") == rational(3) / rational(4)
    assert rational("-7/2") == -rational(7) / 2
    assert rational("5") == rational(5)
    assert rational(" 2/6 ") == rational("1/3")


def test_rational_rejects_floats():
    with pytest.raises(TypeError):
        rational(0.5)


def test_format_rational():
    assert format_rational(rational("4/6")) == "2/3"
    assert format_rational(rational(7)) == "7"
    assert format_rational(rational("-1/3")) == "-1/3"
    assert format_rational(0) == "0"


def test_tagged_multiplication_adds_powers():
    a = Tagged("1/2", 1)
    b = Tagged(3, 2)
    c = a * b
    assert c.value == rational("3/2") and c.power == 3


def test_tagged_power_zero_collapses():
    a = Tagged(2, 1)
    b = Tagged(3, -1)
    assert a * b == rational(6)
    assert not isinstance(a * b, Tagged)


def test_tagged_addition_requires_equal_powers():
    with pytest.raises(ScaleMismatchError):
        Tagged(1, 1) + Tagged(1, 2)
    with pytest.raises(ScaleMismatchError):
        Tagged(1, 1) + rational(1)


def test_tagged_zero_is_neutral():
    z = Tagged(0, 1)
    a = Tagged("2/3", 4)
    assert z + a == a
    assert a + z == a
    assert a + 0 == a
    assert 0 + a == a
    # a plain zero absorbing into a different power is fine: zero has no scale
    assert Tagged(0, 3) + rational(5) == rational(5)


def test_tagged_division_and_pow():
    a = Tagged(6, 2)
    assert a / 3 == Tagged(2, 2)
    assert a / Tagged(2, 1) == Tagged(3, 1)
    assert 1 / Tagged(2, 1) == Tagged("1/2", -1)
    assert Tagged(2, 1) ** 3 == Tagged(8, 3)
    assert Tagged(2, 1) ** 0 == rational(1)


def test_tagged_float_value():
    assert math.isclose(float(Tagged("3/2", 2)), 1.5 * math.pi)
    assert math.isclose(as_float(Tagged(1, 1)), SCALE_FLOATS["sqrt_pi"])


def test_tagged_rejects_unknown_symbol():
    with pytest.raises(ValueError):
        Tagged(1, 1, symbol="sqrt_2")


def test_tagged_immutable():
    t = Tagged(1, 1)
    with pytest.raises(AttributeError):
        t.value = rational(2)


def test_tagged_factory():
    assert tagged(3, 0) == rational(3)
    assert isinstance(tagged(3, 1), Tagged)


def test_scalar_is_zero():
    assert scalar_is_zero(rational(0))
    assert scalar_is_zero(Tagged(0, 5))
    assert not scalar_is_zero(Tagged(1, 1))
    assert scalar_is_zero(0.0)


def test_scalar_json():
    assert scalar_json(rational("1/3")) == "1/3"
    assert scalar_json(Tagged("3/2", 2)) == {
        "rational": "3/2",
        "symbol": "sqrt_pi",
        "power": 2,
    }
    assert scalar_json(0.25) == 0.25

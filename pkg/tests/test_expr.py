from fractions import Fraction

import pytest

from slopegap.expr import ExpressionError, UnknownConstantError, evaluate, evaluate_rational


def test_trig_identity_is_exact(field):
    assert evaluate(field, "1/(2*sin(pi/14))") == evaluate(field, "1 + 2*cos(2*pi/7)")


def test_cot_value(field):
    assert float(evaluate(field, "cot(pi/7)")) == pytest.approx(2.0765213965723364, abs=1e-13)


def test_named_constants(field):
    assert evaluate(field, "l1 + l2") == 1 + field.constants["l2"]
    assert evaluate(field, "2*x", names={"x": field.one}) == 2


def test_negative_integer_power(field):
    assert evaluate(field, "2**-1") == field(Fraction(1, 2))


def test_unknown_constant(field):
    with pytest.raises(UnknownConstantError) as info:
        evaluate(field, "l9 + 1")
    assert info.value.name == "l9"


def test_bare_pi_is_rejected(field):
    with pytest.raises(ExpressionError, match="pi may only appear"):
        evaluate(field, "pi")


@pytest.mark.parametrize("text", ["1 +", "2**(1/2)", "sqrt(2)", "cos(1)", "1/0"])
def test_malformed(field, text):
    with pytest.raises(ExpressionError):
        evaluate(field, text)


def test_rationals():
    assert evaluate_rational("3/4") == Fraction(3, 4)
    assert evaluate_rational(5) == 5
    assert evaluate_rational("-(1/2) + 1") == Fraction(1, 2)
    with pytest.raises(ExpressionError):
        evaluate_rational("cos(pi/3)")

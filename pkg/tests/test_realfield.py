import math
from fractions import Fraction

import mpmath
import pytest

from slopegap.realfield import FieldError, RealField, constant


def test_sqrt2_squares_to_two(sqrt2):
    s = sqrt2.gen
    assert s * s == 2
    assert s.sign() == 1
    assert (s - Fraction(3, 2)).sign() == -1
    assert float(s) == pytest.approx(math.sqrt(2), abs=1e-15)


def test_inverse_and_division(sqrt2):
    s = sqrt2.gen
    assert s.inverse() * s == 1
    assert 1 / s == s / 2
    assert (1 + s) * (s - 1) == 1
    assert (1 + s) ** -1 == s - 1


def test_division_by_zero(sqrt2):
    with pytest.raises(FieldError):
        sqrt2.zero.inverse()
    with pytest.raises(FieldError):
        sqrt2.one / 0


def test_interval_must_isolate_one_root():
    with pytest.raises(FieldError):
        RealField([-2, 0, 1], (-2, 2))
    with pytest.raises(FieldError):
        RealField([1, 2], (0, 1))


def test_trig_base_is_checked():
    with pytest.raises(FieldError, match="2cos"):
        RealField([-2, 0, 1], (1, 2), trig_base=6)
    RealField([-2, 0, 1], (1, 2), trig_base=4)


def test_pythagorean_identity_is_exact(field):
    for k in range(1, 14):
        c, s = field.cos_pi(Fraction(k, 14)), field.sin_pi(Fraction(k, 14))
        assert c * c + s * s == 1


def test_trig_values_match_mpmath(field):
    with mpmath.workdps(40):
        for k in (1, 2, 3, 5):
            got = field.cos_pi(Fraction(k, 7)).to_mpf()
            assert abs(got - mpmath.cos(k * mpmath.pi / 7)) < mpmath.mpf(10) ** -35


def test_angle_outside_trig_base(field):
    with pytest.raises(FieldError):
        field.cos_pi(Fraction(1, 5))


def test_sign_agrees_with_float(field):
    l2 = field.cos_pi(Fraction(1, 7)) * 2
    l3 = 1 / (field.sin_pi(Fraction(1, 14)) * 2)
    assert l3 > l2 > 1
    assert (l3 - l2 - Fraction(44, 100)).sign() == 1
    assert (l3 - l2 - Fraction(45, 100)).sign() == -1


def test_elements_of_different_fields_do_not_mix(field, sqrt2):
    with pytest.raises(FieldError):
        field.one + sqrt2.one


def test_approx_within_tolerance(sqrt2):
    q = sqrt2.gen.approx(Fraction(1, 10 ** 30))
    assert abs(q * q - 2) < Fraction(1, 10 ** 29)


def test_constant_lookup(field):
    assert constant(field, "l2") == field.constants["l2"]
    assert constant(field, "2*cos(pi/7)") == field.constants["l2"]

from fractions import Fraction

import pytest

from slopegap.expr import evaluate
from slopegap.geometry import vec
from slopegap.section import (
    SectionError,
    candidacy_interval,
    candidacy_interval_left,
    is_candidate,
    is_left_candidate,
    return_time,
    strip_value,
)


def test_omega(heptagon):
    t = heptagon.transversal
    assert t.area() == evaluate(heptagon.field, "cot(pi/7)")
    assert float(t.a_left) == pytest.approx(-0.228243, abs=1e-6)
    assert float(t.a_right) == pytest.approx(3.924799, abs=1e-6)
    assert t.a_right - t.a_left == heptagon.cusp.alpha


def test_top_edge_is_half_open(heptagon):
    t = heptagon.transversal
    assert t.on_top_edge(t.a_right)
    assert not t.on_top_edge(t.a_left)


def test_candidacy_intervals(field):
    v = vec(field, 2, 1)
    left = candidacy_interval_left(v)
    assert (left.lo, left.hi) == (1, 2)
    assert left.contains(field(2)) and not left.contains(field(1))
    right = candidacy_interval(v)
    assert right.contains(field(1)) and not right.contains(field(2))


def test_candidacy_at_strip_edges(field):
    v = vec(field, 2, 1)
    point = vec(field, 1, 1)
    assert strip_value(v, point) == 1
    assert not is_left_candidate(v, point)
    assert is_candidate(v, point)
    assert not is_left_candidate(vec(field, 1, 0), point)


def test_return_time(field):
    v = vec(field, 2, 1)
    assert return_time(v, vec(field, Fraction(3, 2), 1)) == 2
    assert return_time(v, vec(field, 1, Fraction(3, 4))) == Fraction(8, 3)
    with pytest.raises(SectionError):
        return_time(v, vec(field, 2, 1))


def test_restricted_top_edge(heptagon):
    t = heptagon.transversal
    half = t.restricted(t.a_left, t.a_left + 1)
    assert half.a_right == t.a_left + 1
    with pytest.raises(SectionError):
        t.restricted(t.a_left - 1, t.a_right)

from fractions import Fraction

import pytest

from slopegap.expr import evaluate
from slopegap.geometry import Vec2, vec
from slopegap.section import strip_value
from slopegap.winners import (
    SearchConfig,
    UnboundedRegion,
    WinnerError,
    find_seed,
    left_winner_at,
    winner_at,
    winner_search_region,
)

WINNERS = [
    ("2 + 3*cos(2*pi/7)", "sin(2*pi/7)"),
    ("4*cos(pi/7) + 3*cos(3*pi/7)", "sin(3*pi/7)"),
    ("4*cos(pi/7) + cos(3*pi/7)", "sin(3*pi/7)"),
    ("2 + cos(2*pi/7)", "sin(2*pi/7)"),
    ("cos(pi/7)", "sin(pi/7)"),
]

ENDPOINTS = [
    "(3*cos(pi/7) - 1)/sin(pi/7)",
    "(1 + 3*cos(2*pi/7))/sin(2*pi/7)",
    "(4*cos(pi/7) + 3*cos(3*pi/7) - 1)/sin(3*pi/7)",
    "(4*cos(pi/7) + cos(3*pi/7) - 1)/sin(3*pi/7)",
    "(1 + cos(2*pi/7))/sin(2*pi/7)",
    "(cos(pi/7) - 1)/sin(pi/7)",
]


def exact_winner(field, i):
    x, y = WINNERS[i]
    return Vec2(evaluate(field, x), evaluate(field, y))


def test_sheared_winners(heptagon, records):
    assert [r.sheared for r in records] == list(heptagon.expected.winners)


def test_winners_are_exact(field, records):
    assert [r.vector for r in records] == [exact_winner(field, i) for i in range(5)]


def test_endpoints_are_exact(field, records):
    endpoints = [r.a_cur for r in records] + [records[-1].a_next]
    assert endpoints == [evaluate(field, text) for text in ENDPOINTS]


def test_endpoints(heptagon, records):
    endpoints = [float(r.a_cur) for r in records] + [float(records[-1].a_next)]
    assert endpoints == pytest.approx(list(heptagon.expected.endpoints), abs=1e-6)


def test_intervals_abut_and_end_at_cusp_vector(heptagon, records):
    for left, right in zip(records, records[1:]):
        assert left.a_next == right.a_cur
    assert records[0].a_cur == heptagon.transversal.a_right
    assert records[-1].a_next == heptagon.transversal.a_left
    assert records[-1].vector == heptagon.cusp.vector


def test_winner_at(heptagon, records):
    assert winner_at(records, records[2].a_cur) is records[2]
    with pytest.raises(WinnerError):
        winner_at(records, heptagon.transversal.a_left)


def test_left_winner_inside_each_interval(heptagon, records):
    t = heptagon.transversal
    for r in records:
        mid = (r.a_next + r.a_cur) / 2
        assert left_winner_at(t.top_point(mid), heptagon.surface, t, heptagon.search) == r.vector


def test_seed_on_strip_edge_is_replaced(heptagon, field):
    t = heptagon.transversal
    point = t.top_point(evaluate(field, ENDPOINTS[2]))
    edge = exact_winner(field, 3)
    assert strip_value(edge, point) == 0
    assert isinstance(winner_search_region(point, edge), UnboundedRegion)

    seed = find_seed(point, heptagon.surface, heptagon.search, inside=True)
    assert strip_value(seed, point).sign() > 0
    assert left_winner_at(point, heptagon.surface, t, heptagon.search, seed=edge) == exact_winner(field, 2)
    assert left_winner_at(point, heptagon.surface, t, heptagon.search) == exact_winner(field, 2)


def test_vertical_seed_resolves_through_width_check(heptagon, field):
    t = heptagon.transversal
    point = t.top_point(evaluate(field, ENDPOINTS[4]))
    cusp = heptagon.cusp.vector
    assert isinstance(winner_search_region(point, cusp), UnboundedRegion)
    assert left_winner_at(point, heptagon.surface, t, heptagon.search) == cusp


def test_unbounded_region_without_width_check_is_inconclusive(heptagon, field):
    t = heptagon.transversal
    point = t.top_point(evaluate(field, ENDPOINTS[4]))
    config = SearchConfig(fallback_width_check=False)
    with pytest.raises(WinnerError, match="inconclusive"):
        left_winner_at(point, heptagon.surface, t, config)


def test_search_region_needs_a_candidate(field):
    point = vec(field, 1, 1)
    with pytest.raises(WinnerError):
        winner_search_region(point, vec(field, 2, 1))


def test_search_config_is_validated():
    with pytest.raises(WinnerError):
        SearchConfig(initial_box_margin=Fraction(1, 2))
    with pytest.raises(WinnerError):
        SearchConfig(seed_box=Fraction(32))

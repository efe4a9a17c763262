from fractions import Fraction

import pytest

from slopegap.explorer import holonomy_vectors
from slopegap.expr import evaluate
from slopegap.geometry import Vec2, identity, map_affine, vec
from slopegap.surface import (
    Gluing,
    GluingKind,
    Rectangle,
    StaircaseSurface,
    SurfaceError,
    TraceResult,
    generate_L,
    is_holonomy,
    lattice_values,
    trace,
)
from slopegap.winners import enumerate_region_candidates, winner_search_region


def torus(f, target_span=None):
    """Unit square with opposite sides glued: the square torus with one marked point."""
    zero, one = f.zero, f.one
    gluings = [
        Gluing(GluingKind.VERTICAL, 0, 0, (zero, one), target_span or (zero, one)),
        Gluing(GluingKind.HORIZONTAL, 0, 0, (zero, one), (zero, one)),
    ]
    return StaircaseSurface(f, [Rectangle(vec(f, 0, 0), one, one)], gluings, [("1", one)], identity(f))


def test_torus_holonomy(sqrt2):
    s = torus(sqrt2)
    assert is_holonomy(s, vec(sqrt2, 1, 0))
    assert is_holonomy(s, vec(sqrt2, 1, 2))
    assert is_holonomy(s, vec(sqrt2, 3, 2))
    assert not is_holonomy(s, vec(sqrt2, 2, 2))
    assert not is_holonomy(s, vec(sqrt2, Fraction(1, 2), 1))


def test_trace_stops_at_an_earlier_vertex(sqrt2):
    s = torus(sqrt2)
    origin = s.vertices.index(vec(sqrt2, 0, 0))
    assert trace(s, origin, vec(sqrt2, 2, 2)) is TraceResult.EARLY_VERTEX
    assert trace(s, origin, vec(sqrt2, 1, 1)) is TraceResult.EXACT_HIT
    with pytest.raises(SurfaceError):
        trace(s, origin, vec(sqrt2, -1, 1))


def test_gluing_length_mismatch(sqrt2):
    with pytest.raises(SurfaceError, match="different lengths"):
        torus(sqrt2, target_span=(sqrt2.zero, sqrt2(Fraction(1, 2))))


def test_lattice_values(sqrt2):
    assert lattice_values(torus(sqrt2), sqrt2(3)) == [0, 1, 2, 3]


def test_explorer_matches_lattice_on_torus(sqrt2):
    s = torus(sqrt2)
    bound = sqrt2(3)
    expected = [v for v in generate_L(s, bound, bound) if not v.is_zero() and is_holonomy(s, v)]
    assert holonomy_vectors(s, sqrt2.zero, bound, bound) == expected
    assert vec(sqrt2, 2, 3) in expected
    assert vec(sqrt2, 2, 2) not in expected


def test_heptagon_area(heptagon):
    s = heptagon.surface
    target = heptagon.field.constants["polygon_area"] * s.shear.det()
    assert float(s.area()) == pytest.approx(float(target), abs=1e-12)


def test_heptagon_cusp_vectors(heptagon):
    s, f = heptagon.surface, heptagon.field
    assert is_holonomy(s, vec(f, 1, 0))
    assert is_holonomy(s, vec(f, 0, 1))
    assert not is_holonomy(s, vec(f, Fraction(1, 2), 0))


def test_explorer_matches_lattice_on_heptagon(heptagon):
    s, f = heptagon.surface, heptagon.field
    bound = f(3)
    expected = [v for v in generate_L(s, bound, bound) if not v.is_zero() and is_holonomy(s, v)]
    assert holonomy_vectors(s, f.zero, bound, bound) == expected
    assert Vec2(f.constants["l3"], f.constants["l2"]) in expected


def lattice_vec(f, x, y):
    return Vec2(evaluate(f, x), evaluate(f, y))


def test_heptagon_unit_box(heptagon):
    s, f = heptagon.surface, heptagon.field
    box = generate_L(s, f.one, f.one)
    assert len(box) == 4
    assert set(box) == {vec(f, 0, 0), vec(f, 1, 0), vec(f, 0, 1), vec(f, 1, 1)}


def test_heptagon_lattice_point_off_the_surface(heptagon):
    s, f = heptagon.surface, heptagon.field
    assert is_holonomy(s, lattice_vec(f, "l3", "2")) is False


def test_search_region_lattice_table(heptagon):
    s, f = heptagon.surface, heptagon.field
    a = evaluate(f, "(1 + 3*cos(2*pi/7))/sin(2*pi/7)")
    w2 = lattice_vec(f, "4*cos(pi/7) + 3*cos(3*pi/7)", "sin(3*pi/7)")
    region = winner_search_region(heptagon.transversal.top_point(a), w2)
    m = s.shear
    sheared = map_affine(region.triangle, m.a, m.b, m.c, m.d)
    bound = f(4)
    inside = {v for v in generate_L(s, bound, bound) if v.y.sign() > 0 and sheared.contains(v)}
    table = [
        ("l3", "l2"), ("l3", "2"), ("2", "l2"), ("l3", "l3"), ("l2", "l2"),
        ("1", "1"), ("1 + l3", "1 + l3"), ("1 + l2", "1 + l2"), ("2", "2"), ("3", "3"),
    ]
    assert inside == {lattice_vec(f, x, y) for x, y in table}
    assert not is_holonomy(s, lattice_vec(f, "l3", "2"))
    assert not is_holonomy(s, lattice_vec(f, "2", "l2"))
    assert m.apply(w2) == lattice_vec(f, "l3", "l3")
    assert enumerate_region_candidates(region, s)[0] == w2

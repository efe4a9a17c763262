import math
from fractions import Fraction

import mpmath
import pytest

from slopegap import distribution as dist_mod
from slopegap.distribution import (
    BreakpointPdfError,
    DistributionError,
    SweepRegion,
    build_from_regions,
)
from slopegap.geometry import ConvexPolygon, vec

HEPTAGON_VOLUME = 5 * math.pi ** 2 / 14


def toy(f, points, threads=1):
    """One region with winner (1, 1), given directly in (u, b) coordinates, Ω of area 1/2."""
    winner = vec(f, 1, 1)
    piece = ConvexPolygon.from_points([vec(f, *p) for p in points])
    region = SweepRegion(1, winner, (piece,), 1 / winner.y)
    return build_from_regions([region], f(Fraction(1, 2)), dps=30, threads=threads)


TRIANGLE = [(0, 1), (1, 0), (1, 1)]
SQUARE = [(0, 0), (1, 0), (1, 1), (0, 1)]


def triangle_cdf(t):
    c = 1 / t
    return 2 * (1 - c + c * math.log(c))


def test_triangle_breakpoints(sqrt2):
    dist = toy(sqrt2, TRIANGLE)
    assert [bp.decimal for bp in dist.breakpoints] == [1.0, 4.0]


@pytest.mark.parametrize("t", [1.5, 2.0, 3.0, 3.9])
def test_triangle_cdf_in_the_corner(sqrt2, t):
    dist = toy(sqrt2, TRIANGLE)
    assert float(dist_mod.cdf(dist, t)) == pytest.approx(triangle_cdf(t), abs=1e-12)
    assert float(dist_mod.pdf(dist, t)) == pytest.approx(2 * math.log(t) / t ** 2, abs=1e-12)


def test_triangle_reference_values(sqrt2):
    dist = toy(sqrt2, TRIANGLE)
    assert float(dist_mod.cdf(dist, 2)) == pytest.approx(0.306853, abs=1e-6)
    assert float(dist_mod.pdf(dist, 2)) == pytest.approx(0.346574, abs=1e-6)


def test_triangle_support_and_tail(sqrt2):
    dist = toy(sqrt2, TRIANGLE)
    assert dist_mod.cdf(dist, Fraction(1, 2)) == 0
    assert dist_mod.cdf(dist, 1) == 0
    assert dist_mod.cdf(dist, 3) < dist_mod.cdf(dist, 8) < 1
    assert dist_mod.cdf(dist, 10 ** 6) > 0.999


def test_triangle_volume(sqrt2):
    result = dist_mod.volume(toy(sqrt2, TRIANGLE), tolerance=1e-8)
    assert not result.divergent
    assert float(result.value) == pytest.approx(math.pi ** 2 / 6, abs=1e-8)


def test_pdf_is_undefined_at_breakpoints(sqrt2):
    dist = toy(sqrt2, TRIANGLE)
    with pytest.raises(BreakpointPdfError) as info:
        dist_mod.pdf(dist, 1)
    assert info.value.left == 0
    assert info.value.right > 0
    with pytest.raises(BreakpointPdfError):
        dist_mod.pdf(dist, 4)


def test_pdf_matches_finite_difference(sqrt2):
    dist = toy(sqrt2, TRIANGLE)
    for t in (1.7, 5.0, 12.0):
        assert abs(dist_mod.pdf(dist, t) - dist_mod.pdf_finite_difference(dist, t)) < 1e-8


def test_threaded_grid_matches(sqrt2):
    ts = [1.2, 2.5, 4.5, 9.0]
    single = dist_mod.cdf_grid(toy(sqrt2, TRIANGLE), ts)
    pooled = dist_mod.cdf_grid(toy(sqrt2, TRIANGLE, threads=2), ts)
    assert single == pooled


def test_square_volume_diverges(sqrt2):
    dist = toy(sqrt2, SQUARE)
    assert [bp.decimal for bp in dist.breakpoints] == [1.0]
    result = dist_mod.volume(dist)
    assert result.divergent
    assert result.value == mpmath.inf


def test_t_must_be_positive(sqrt2):
    with pytest.raises(DistributionError):
        dist_mod.cdf(toy(sqrt2, TRIANGLE), 0)


def test_heptagon_breakpoints(heptagon, dist):
    got = [bp.decimal for bp in dist.breakpoints]
    assert len(got) == 13
    assert got == pytest.approx(list(heptagon.expected.breakpoints), abs=1e-5)


def test_heptagon_support_starts_at_first_breakpoint(dist):
    t1 = dist.breakpoints[0].decimal
    assert dist_mod.cdf(dist, t1 - 1e-6) == 0
    assert dist_mod.cdf(dist, t1 + 1e-3) > 0


def test_heptagon_cdf_is_monotone(dist):
    ts = [0.3 + 0.1 * k for k in range(100)]
    values = [c for _, _, c in dist_mod.cdf_grid(dist, ts, with_pdf=False)]
    assert all(b >= a for a, b in zip(values, values[1:]))
    assert values[-1] < 1
    assert dist_mod.cdf(dist, 1e4) >= 0.999


def test_heptagon_regions_add_up(dist):
    t = 2.7
    total = sum(dist_mod.region_cdf(dist, i, t) for i in range(len(dist.regions)))
    assert abs(total / dist.normalizer.to_mpf() - dist_mod.cdf(dist, t)) < 1e-12


def test_heptagon_pdf_agrees_with_cdf(dist):
    assert abs(dist_mod.pdf(dist, 1.2) - dist_mod.pdf_finite_difference(dist, 1.2)) < 1e-6
    with pytest.raises(BreakpointPdfError):
        dist_mod.pdf(dist, dist.breakpoints[4].decimal)
    assert abs(dist_mod.integrate_pdf(dist, dist.breakpoints[0].decimal, 5) - dist_mod.cdf(dist, 5)) < 1e-7


def test_heptagon_volume(pipeline):
    result = pipeline.volume
    assert not result.divergent
    assert float(result.value) == pytest.approx(HEPTAGON_VOLUME, abs=1e-8)
    assert float(mpmath.fsum(r.value for r in result.regions)) == pytest.approx(float(result.value))

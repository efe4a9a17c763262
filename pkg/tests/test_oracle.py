from fractions import Fraction

import numpy as np
import pytest

from slopegap import oracle
from slopegap.distribution import SweepRegion, build_from_regions
from slopegap.geometry import ConvexPolygon, vec
from slopegap.oracle import OracleError


def test_unit_radius_holds_both_cusp_vectors(heptagon):
    f = heptagon.field
    found = oracle.enumerate_saddle_connections(heptagon.surface, 1)
    assert vec(f, 1, 0) in found
    assert heptagon.cusp.vector in found
    assert all(v.y <= v.x <= 1 for v in found)


def test_half_radius_is_below_the_shortest_connection(heptagon):
    assert oracle.enumerate_saddle_connections(heptagon.surface, Fraction(1, 2)) == []


def test_gaps_are_scaled_by_radius_squared(sqrt2):
    vectors = [vec(sqrt2, 1, 0), vec(sqrt2, 2, 1), vec(sqrt2, 1, 1), vec(sqrt2, 2, 2)]
    emp = oracle.gaps_from_vectors(vectors, 2)
    assert emp.connections == 4
    assert emp.slopes.tolist() == [0.0, 0.5, 1.0]
    assert emp.gaps.tolist() == [2.0, 2.0]
    assert emp.min_gap == 2.0


def test_single_slope_is_rejected(sqrt2):
    with pytest.raises(OracleError):
        oracle.gaps_from_vectors([vec(sqrt2, 1, 1), vec(sqrt2, 2, 2)], 2)


def test_ks_statistic_of_a_regular_sample():
    sample = (np.arange(100) + 0.5) / 100 * 4
    assert oracle.ks_statistic(sample, oracle.uniform_cdf(0.0, 4.0)) == pytest.approx(0.005)
    assert oracle.uniform_cdf(0.0, 4.0)([-1.0, 2.0, 5.0]).tolist() == [0.0, 0.5, 1.0]
    with pytest.raises(OracleError):
        oracle.ks_statistic(np.array([]), oracle.uniform_cdf(0.0, 1.0))


def test_samples_from_a_cdf_follow_it(sqrt2):
    winner = vec(sqrt2, 1, 1)
    triangle = ConvexPolygon.from_points([vec(sqrt2, 0, 1), vec(sqrt2, 1, 0), vec(sqrt2, 1, 1)])
    dist = build_from_regions([SweepRegion(1, winner, (triangle,), 1 / winner.y)], sqrt2(Fraction(1, 2)), dps=20)
    sample = oracle.sample_from_cdf(dist, 10_000, seed=3)
    assert sample.min() >= 1.0
    assert oracle.ks_statistic(sample, dist) < 0.02
    assert oracle.ks_statistic(sample, oracle.uniform_cdf(0.0, 4.0)) > 0.2


def test_brute_force_winner_agrees_with_the_sweep(heptagon, records):
    t = heptagon.transversal
    for r in records:
        point = t.top_point((r.a_next + r.a_cur) / 2)
        assert oracle.brute_winner_at(point, heptagon.surface, 4) == r.vector


def test_histogram_is_a_density(sqrt2):
    vectors = [vec(sqrt2, 3, k) for k in range(4)] + [vec(sqrt2, 2, 1)]
    densities, edges = oracle.gap_histogram(oracle.gaps_from_vectors(vectors, 3), bins=4, t_max=4.0)
    assert float(np.sum(densities * np.diff(edges))) == pytest.approx(1.0)


@pytest.mark.slow
def test_empirical_gaps_approach_the_distribution(heptagon, dist):
    emp = oracle.empirical_gaps(heptagon.surface, heptagon.numerics.radius, threads=4)
    t1 = dist.breakpoints[0].decimal
    assert emp.min_gap >= heptagon.expected.min_gap_ratio * t1
    assert oracle.ks_distance(emp, dist) <= heptagon.expected.ks_max

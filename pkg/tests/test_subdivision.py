import numpy as np
import pytest

from slopegap import oracle
from slopegap.checks import oracle_bound
from slopegap.geometry import Vec2
from slopegap.subdivision import CoverageError, check_covers, strip_halfplanes


def test_regions_cover_omega(pipeline):
    regions = pipeline.regions
    total = sum((r.area() for r in regions), pipeline.config.field.zero)
    assert total == pipeline.transversal.area()
    assert all(r.pieces for r in regions)


def test_missing_region_is_reported(pipeline):
    with pytest.raises(CoverageError, match="uncovered"):
        check_covers(pipeline.transversal, pipeline.regions[:-1])


def test_each_interval_midpoint_lies_in_its_region(pipeline):
    t = pipeline.transversal
    for region in pipeline.regions:
        r = region.record
        assert region.contains(t.top_point((r.a_next + r.a_cur) / 2))


def test_strip_halfplanes(records):
    v = records[0].vector
    lower, upper = strip_halfplanes(v)
    f = v.x.field
    on_line = Vec2(v.x / v.y, f.one)
    assert lower.contains(on_line) and upper.contains(on_line)
    assert lower.value(on_line) == 0


def interior_points(region, count, rng):
    f = region.vector.x.field
    points = []
    for k in range(count):
        piece = region.pieces[k % len(region.pieces)]
        weights = [f(int(w)) for w in rng.integers(1, 1000, size=len(piece.vertices))]
        total = sum(weights, f.zero)
        x = sum((p.x * w for p, w in zip(piece.vertices, weights)), f.zero) / total
        y = sum((p.y * w for p, w in zip(piece.vertices, weights)), f.zero) / total
        points.append(Vec2(x, y))
    return points


def test_interior_points_recheck_to_their_winner(pipeline):
    vectors = oracle.sheared_box_vectors(pipeline.surface, oracle_bound(pipeline.records))
    rng = np.random.default_rng(2024)
    for region in pipeline.regions:
        for point in interior_points(region, 100, rng):
            assert region.contains(point, strict=True)
            assert oracle.least_left_candidate(point, vectors) == region.vector

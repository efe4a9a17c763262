import pytest

from slopegap import closed_form
from slopegap.closed_form import ClosedFormError, branch_of, closed_form_cdf, closed_form_region_cdf


def test_breakpoints_match_reference(heptagon):
    values = [float(t) for t in closed_form.closed_form_breakpoints()]
    assert values == sorted(values)
    assert values == pytest.approx(list(heptagon.expected.breakpoints), abs=1e-5)


def test_breakpoints_match_sweep(dist):
    exact = closed_form.closed_form_breakpoints()
    swept = [bp.value.to_mpf() for bp in dist.breakpoints]
    assert all(abs(a - b) < 1e-12 for a, b in zip(exact, swept))


def test_zero_below_support():
    assert closed_form_cdf(0.4) == 0


@pytest.mark.parametrize(
    "region, t, expected",
    [
        (5, 0.5, (1, "F5: t1 ≤ t < t12")),
        (1, 0.5, (0, "F1: t < t2")),
        (1, 100, (3, "F1: t ≥ t4")),
        (4, 2.17, (2, "F4: t9 ≤ t < t10")),
    ],
)
def test_branch_of(region, t, expected):
    assert branch_of(region, t) == expected


def test_invalid_arguments():
    with pytest.raises(ClosedFormError):
        closed_form_region_cdf(6, 1.0)
    with pytest.raises(ClosedFormError):
        closed_form_region_cdf(1, 0)


def test_first_region_is_continuous_across_its_branches():
    for k in (2, 3, 4):
        t = closed_form.closed_form_breakpoints()[k - 1]
        below = closed_form_region_cdf(1, t - 1e-12)
        above = closed_form_region_cdf(1, t + 1e-12)
        assert abs(above - below) < 1e-9


@pytest.mark.parametrize("t", [0.9, 1.2, 2.0, 6.0])
def test_first_region_matches_sweep(pipeline, t):
    assert abs(closed_form_region_cdf(1, t) - pipeline.region_cdf_by_winner(1, t)) < 1e-6


@pytest.mark.parametrize("t", [0.5, 1.0, 3.0])
def test_cusp_region_matches_sweep_before_t12(pipeline, t):
    assert abs(closed_form_region_cdf(5, t) - pipeline.region_cdf_by_winner(5, t)) < 1e-6


def test_comparison_grid_brackets_breakpoints():
    grid = closed_form.comparison_grid(0.4, 10.0, 50)
    assert grid == sorted(grid)
    assert len(grid) == 50 + 2 * 13
    with pytest.raises(ClosedFormError):
        closed_form.comparison_grid(2.0, 1.0, 10)


def test_comparison_of_identical_sources():
    ts = closed_form.comparison_grid(0.4, 6.0, 20)
    report = closed_form.compare_with_sweep(closed_form_region_cdf, closed_form_cdf, ts)
    assert report.total_max_deviation == 0
    assert report.located == []
    assert {b.region for b in report.branches} == {1, 2, 3, 4, 5}

import dataclasses
from types import SimpleNamespace

import pytest

from slopegap.checks import (
    check_breakpoints,
    check_empirical,
    check_oracle,
    check_slope_order,
    oracle_bound,
    run_checks,
)

SUITE = {
    "winner reproduction",
    "subdivision area",
    "breakpoints",
    "volume",
    "distribution sanity",
    "closed-form cross-check",
    "slope order preservation",
    "oracle equivalence",
}


@pytest.fixture(scope="module")
def verified(pipeline):
    seen = []
    results = run_checks(pipeline, empirical=False, progress=seen.append)
    return results, seen


def test_suite_passes_on_heptagon(verified):
    results, _ = verified
    assert {r.name for r in results} == SUITE
    assert [(r.name, r.measured) for r in results if not r.passed] == []


def test_progress_sees_every_result(verified):
    results, seen = verified
    assert seen == results
    assert all(r.seconds >= 0 for r in results)


def test_slope_order_survives_horocycle_matrices(pipeline):
    result = check_slope_order(pipeline, trials=300, seed=11)
    assert result.passed
    assert result.measured == "0 failures in 300"


def test_oracle_bound_is_the_largest_winner_coordinate(field, records):
    assert oracle_bound(records) == field.constants["l3"]


def test_oracle_agrees_at_other_random_points(pipeline):
    result = check_oracle(pipeline, count=6, seed=5)
    assert result.passed, result.measured
    assert result.measured.startswith("11/11")


def test_shifted_reference_breakpoints_fail(heptagon, dist):
    shifted = tuple(b + 1e-3 for b in heptagon.expected.breakpoints)
    stub = SimpleNamespace(
        config=dataclasses.replace(heptagon, expected=dataclasses.replace(heptagon.expected, breakpoints=shifted)),
        distribution=dist,
    )
    result = check_breakpoints(stub)
    assert not result.passed
    assert result.measured.startswith("13 breakpoints")


@pytest.mark.slow
def test_empirical_gaps_converge(pipeline):
    result = check_empirical(pipeline)
    assert result.passed, result.measured

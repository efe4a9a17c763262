"""The acceptance suite behind `slopegap verify`."""

import logging
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, List, Optional, Sequence

import mpmath
import numpy as np

from slopegap import closed_form, distribution as dist_mod, oracle
from slopegap.geometry import Vec2, slope_less
from slopegap.pipeline import Pipeline
from slopegap.realfield import FieldElement
from slopegap.winners import WinnerRecord, left_winner_at

log = logging.getLogger(__name__)

SANITY_SAMPLES = 10_000


@dataclass
class CheckResult:
    name: str
    passed: bool
    measured: str
    target: str
    seconds: float = 0.0


def _fmt(x, digits: int = 6) -> str:
    return mpmath.nstr(mpmath.mpf(x), digits)


def check_winners(p: Pipeline) -> CheckResult:
    exp = p.config.expected
    records = p.records
    got = [r.sheared for r in records]
    endpoints = [float(r.a_cur) for r in records] + [float(records[-1].a_next)]
    vectors_ok = not exp.winners or got == list(exp.winners)
    worst = max((abs(a - b) for a, b in zip(endpoints, exp.endpoints)), default=0.0)
    endpoints_ok = not exp.endpoints or (len(endpoints) == len(exp.endpoints) and worst <= exp.endpoint_tolerance)
    return CheckResult(
        "winner reproduction",
        vectors_ok and endpoints_ok,
        f"{len(records)} winners, endpoint deviation {worst:.2g}" + ("" if vectors_ok else ", vectors differ"),
        f"{len(exp.winners) or '?'} winners, endpoints within {exp.endpoint_tolerance:g}",
    )


def check_breakpoints(p: Pipeline) -> CheckResult:
    exp = p.config.expected
    got = [bp.decimal for bp in p.distribution.breakpoints]
    if not exp.breakpoints:
        return CheckResult("breakpoints", True, f"{len(got)} breakpoints", "no reference values")
    worst = max((abs(a - b) for a, b in zip(got, exp.breakpoints)), default=float("inf"))
    passed = len(got) == len(exp.breakpoints) and worst <= exp.breakpoint_tolerance
    return CheckResult(
        "breakpoints",
        passed,
        f"{len(got)} breakpoints, max deviation {worst:.2g}",
        f"{len(exp.breakpoints)} within {exp.breakpoint_tolerance:g}",
    )


def check_volume(p: Pipeline) -> CheckResult:
    exp = p.config.expected
    result = p.volume
    if result.divergent:
        return CheckResult("volume", False, "divergent", "finite")
    if exp.volume is None:
        return CheckResult("volume", result.converged, _fmt(result.value, 16), "converged quadrature")
    deviation = abs(result.value - exp.volume)
    return CheckResult(
        "volume",
        result.converged and deviation <= exp.volume_tolerance,
        f"{_fmt(result.value, 16)} ± {_fmt(result.error, 2)}",
        f"{exp.volume!r} within {exp.volume_tolerance:g}",
    )


def check_subdivision_area(p: Pipeline) -> CheckResult:
    total = sum((r.area() for r in p.regions), p.config.field.zero)
    omega = p.transversal.area()
    return CheckResult(
        "subdivision area",
        total == omega,
        f"{float(total):.15g}",
        f"area of Ω = {float(omega):.15g} exactly",
    )


def check_slope_order(p: Pipeline, trials: int = 1000, seed: int = 0) -> CheckResult:
    """Order of slopes survives [[a, b], [0, 1/a]] for a > 0."""
    rng = np.random.default_rng(seed)
    field = p.config.field

    def rational(lo, hi):
        return field(Fraction(int(rng.integers(lo, hi)), int(rng.integers(1, 50))))

    failures = checked = 0
    for _ in range(trials):
        a = rational(1, 200)
        b = rational(-200, 200)
        v1 = Vec2(rational(-100, 100), rational(1, 100))
        v2 = Vec2(rational(-100, 100), rational(1, 100))
        w1 = Vec2(a * v1.x + b * v1.y, v1.y / a)
        w2 = Vec2(a * v2.x + b * v2.y, v2.y / a)
        checked += 1
        if slope_less(v1, v2) is not slope_less(w1, w2):
            failures += 1
    return CheckResult("slope order preservation", failures == 0, f"{failures} failures in {checked}", "0 failures")


def check_distribution(p: Pipeline) -> CheckResult:
    dist = p.distribution
    t1 = min(bp.decimal for bp in dist.breakpoints)
    problems = []
    grid = np.linspace(t1 / 2, p.config.numerics.t_max, 1000)
    values = [c for _, _, c in dist_mod.cdf_grid(dist, [float(t) for t in grid], with_pdf=False)]
    drops = [float(b - a) for a, b in zip(values, values[1:]) if b - a < -1e-12]
    if drops:
        problems.append(f"cdf decreases by {min(drops):.2g}")
    below = dist_mod.cdf(dist, t1 - 1e-6)
    if below != 0:
        problems.append(f"cdf(t1 - 1e-6) = {_fmt(below)}")
    tail = dist_mod.cdf(dist, 1e4)
    if tail < 0.999:
        problems.append(f"cdf(1e4) = {_fmt(tail)}")
    worst_fd = 0.0
    for t in np.linspace(t1 + 0.01, 9.5, 25):
        if dist_mod.distance_to_breakpoint(dist, t) < 1e-3:
            continue
        diff = abs(dist_mod.pdf(dist, float(t)) - dist_mod.pdf_finite_difference(dist, float(t)))
        worst_fd = max(worst_fd, float(diff))
    if worst_fd > 1e-5:
        problems.append(f"pdf vs finite difference {worst_fd:.2g}")
    integral_gap = float(abs(dist_mod.integrate_pdf(dist, t1, 10) - dist_mod.cdf(dist, 10)))
    if integral_gap > 1e-7:
        problems.append(f"∫pdf vs cdf {integral_gap:.2g}")
    return CheckResult(
        "distribution sanity",
        not problems,
        "; ".join(problems) or f"cdf(1e4) = {_fmt(tail, 8)}, fd {worst_fd:.1g}, ∫ {integral_gap:.1g}",
        "monotone, support from t1, tail ≥ 0.999, fd ≤ 1e-5, ∫ ≤ 1e-7",
    )


def check_closed_form(p: Pipeline) -> Optional[CheckResult]:
    if not p.config.expected.closed_form:
        return None
    dist = p.distribution
    sweep_bps = [bp.value.to_mpf() for bp in dist.breakpoints]
    exact_bps = closed_form.closed_form_breakpoints()
    boundaries_ok = len(sweep_bps) == len(exact_bps) and all(
        abs(a - b) < 1e-12 for a, b in zip(sweep_bps, exact_bps)
    )
    n = p.config.numerics
    report = closed_form.compare_with_sweep(
        p.region_cdf_by_winner,
        lambda t: dist_mod.cdf(dist, t),
        closed_form.comparison_grid(n.t_min, n.t_max, n.samples),
    )
    required = [b for b in report.branches if b.region == 1 or (b.region == 5 and b.case <= 1)]
    required_ok = all(b.max_deviation <= report.tolerance for b in required)
    located = ", ".join(b.label for b in report.located) or "none"
    return CheckResult(
        "closed-form cross-check",
        boundaries_ok and required_ok,
        f"total max |Δ| {report.total_max_deviation:.2g}; located: {located}",
        "F1, first two F5 cases and all branch points within 1e-6",
    )


def _oracle_points(p: Pipeline, count: int, seed: int) -> List[Vec2]:
    t = p.transversal
    points = [t.top_point(r.a_cur) for r in p.records]
    lo, hi = t.a_left.approx(Fraction(1, 10 ** 9)), t.a_right.approx(Fraction(1, 10 ** 9))
    rng = np.random.default_rng(seed)
    scale = 10 ** 6
    while len(points) < len(p.records) + count:
        a = t.a_left.field(Fraction(int(rng.integers(int(lo * scale), int(hi * scale))), scale))
        if t.on_top_edge(a):
            points.append(t.top_point(a))
    return points


def oracle_bound(records: Sequence[WinnerRecord]) -> FieldElement:
    """Smallest sheared box holding every swept winner.

    A brute search over any box that holds the true winner returns it, since the
    winner is the least-slope left candidate among all holonomy vectors.
    """
    return max(max(abs(r.sheared.x), r.sheared.y) for r in records)


def check_oracle(p: Pipeline, count: int = 20, seed: int = 0) -> CheckResult:
    vectors = oracle.sheared_box_vectors(p.surface, oracle_bound(p.records), threads=p.threads)
    mismatches = []
    points = _oracle_points(p, count, seed)
    for point in points:
        fast = left_winner_at(point, p.surface, p.transversal, p.config.search)
        brute = oracle.least_left_candidate(point, vectors)
        if fast != brute:
            mismatches.append(float(point.x))
    return CheckResult(
        "oracle equivalence",
        not mismatches,
        f"{len(points) - len(mismatches)}/{len(points)} agree"
        + (f"; first mismatch at a = {mismatches[0]:.9g}" if mismatches else ""),
        "exact agreement at all endpoints and random points",
    )


def check_empirical(p: Pipeline, seed: int = 0) -> CheckResult:
    exp = p.config.expected
    dist = p.distribution
    radius = p.config.numerics.radius
    t1 = min(bp.decimal for bp in dist.breakpoints)
    emp = oracle.empirical_gaps(p.surface, radius, threads=p.threads)
    small = oracle.empirical_gaps(p.surface, max(1, radius // 4), threads=p.threads)
    ks = oracle.ks_distance(emp, dist)
    ks_small = oracle.ks_distance(small, dist)
    negative = oracle.ks_distance(emp, oracle.uniform_cdf(0.0, 4.0))
    synthetic = oracle.ks_statistic(oracle.sample_from_cdf(dist, SANITY_SAMPLES, seed), dist)
    problems = []
    if exp.ks_max is not None and ks > exp.ks_max:
        problems.append(f"KS {ks:.3g} > {exp.ks_max}")
    if exp.min_gap_ratio is not None and emp.min_gap < exp.min_gap_ratio * t1:
        problems.append(f"min gap {emp.min_gap:.4g} < {exp.min_gap_ratio}·t1")
    if ks > ks_small:
        problems.append(f"KS grew from {ks_small:.3g} at R = {small.radius:g}")
    if negative < 0.2:
        problems.append(f"uniform control KS {negative:.3g} < 0.2")
    if synthetic > 0.02:
        problems.append(f"synthetic sample KS {synthetic:.3g} > 0.02")
    return CheckResult(
        "empirical convergence",
        not problems,
        "; ".join(problems)
        or f"KS {ks:.3g} (R = {radius}), {ks_small:.3g} (R = {small.radius:g}), min gap {emp.min_gap:.4g}",
        f"KS ≤ {exp.ks_max}, min gap ≥ {exp.min_gap_ratio}·t1, KS non-increasing in R",
    )


def run_checks(p: Pipeline, empirical: bool = True, seed: int = 0,
               progress: Optional[Callable[[CheckResult], None]] = None) -> List[CheckResult]:
    suite: List[Callable[[Pipeline], Optional[CheckResult]]] = [
        check_winners,
        check_subdivision_area,
        check_breakpoints,
        check_volume,
        check_distribution,
        check_closed_form,
        check_slope_order,
        lambda pipe: check_oracle(pipe, seed=seed),
    ]
    if empirical:
        suite.append(lambda pipe: check_empirical(pipe, seed=seed))
    results = []
    for check in suite:
        started = time.monotonic()
        result = check(p)
        if result is None:
            continue
        result.seconds = time.monotonic() - started
        log.info("%s: %s (%s)", result.name, "pass" if result.passed else "FAIL", result.measured)
        results.append(result)
        if progress is not None:
            progress(result)
    return results

"""Closed-form CDF of the double heptagon, region by region.

F1..F5 are the swept (a, b)-areas of the five winner regions below level t,
written as piecewise formulas in logarithms and arctanh. The normalized CDF is
their sum divided by cot(π/7), the area of Ω. These formulas are hand-derived,
so they are compared against the sweep rather than trusted.
"""

import logging
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import mpmath

log = logging.getLogger(__name__)

DEFAULT_DPS = 30
REGIONS = (1, 2, 3, 4, 5)


class ClosedFormError(Exception):
    pass


def _constants() -> Dict[str, mpmath.mpf]:
    pi = mpmath.pi
    return {
        "a1": mpmath.cos(pi / 14),
        "b1": mpmath.sin(pi / 14),
        "a2": mpmath.cos(pi / 7),
        "b2": mpmath.sin(pi / 7),
        "a3": mpmath.cos(3 * pi / 14),
        "b3": mpmath.sin(3 * pi / 14),
    }


def _breakpoints(c) -> List[mpmath.mpf]:
    a1, b1, a2, b2, a3, b3 = (c[k] for k in ("a1", "b1", "a2", "b2", "a3", "b3"))
    return [
        b2,
        a3,
        4 * b2 * b2 / a3,
        a1,
        a1 + b2,
        2 * a1 - b2,
        a1 / (1 - 2 * b1),
        2 * a3 ** 3 / (b1 * (3 - 4 * b1)),
        8 * b2 * b3,
        a1 * a3 / (a3 - b2),
        4 * a1 ** 3 * a3 / (5 * a1 - 2 * a3 - 5 * b2),
        4 * a3,
        b2 / (6 - 8 * a2 + 6 * b1),
    ]


def closed_form_breakpoints(dps: int = DEFAULT_DPS) -> List[mpmath.mpf]:
    """t1..t13 in increasing order."""
    with mpmath.workdps(dps):
        return [+t for t in _breakpoints(_constants())]


# thresholds t_k (1-based) where each F_i changes case
_THRESHOLDS = {
    1: (2, 3, 4),
    2: (4, 5, 6),
    3: (4, 7, 8),
    4: (2, 9, 10, 11),
    5: (1, 12, 13),
}


def _head(x, t):
    return (mpmath.log(x / t) - 1) / t + 1 / x


class _Evaluator:
    def __init__(self, region: int, t):
        self.region = region
        self.t = t
        self.c = _constants()
        self.ts = _breakpoints(self.c)
        self.case = sum(1 for k in _THRESHOLDS[region] if t >= self.ts[k - 1])

    def label(self) -> str:
        return branch_label(self.region, self.case)

    def aux(self, numerator):
        inside = 1 - numerator / self.t
        if inside < 0:
            raise ClosedFormError(
                f"{self.label()}: square root of {mpmath.nstr(inside, 6)} at t = {mpmath.nstr(self.t, 12)}"
            )
        return mpmath.sqrt(inside)

    def atanh(self, x):
        if x >= 1:
            raise ClosedFormError(
                f"{self.label()}: arctanh argument {mpmath.nstr(x, 12)} ≥ 1 at t = {mpmath.nstr(self.t, 12)}"
            )
        return mpmath.atanh(x)

    def value(self):
        return getattr(self, f"_f{self.region}")(self.case)

    def _f1(self, case):
        a1, b1, a2, b2, a3, b3 = self._abc()
        t = self.t
        if case == 0:
            return mpmath.mpf(0)
        if case == 1:
            return _head(a3, t)
        if case == 2:
            A1 = self.aux((2 - 2 * b3) / a3)
            return _head(a3, t) + 2 / t * self.atanh(A1) - a3 * A1 / (2 * b2 ** 2)
        return (a3 / b2 - 2) ** 2 / (2 * a3)

    def _f2(self, case):
        a1, b1, a2, b2, a3, b3 = self._abc()
        t = self.t
        if case == 0:
            return mpmath.mpf(0)
        if case == 1:
            return _head(a1, t)
        if case == 2:
            A2 = self.aux((2 * a2 - 2 * b1) / a1)
            ratio = 16 * b1 ** 2 * b3 ** 2 * (2 * a2 - 2 * b1 - 1) / (1 - 4 * b1 * b3) ** 2
            tail = 162 * b1 * b3 - 12 * b3 - 15 + (2 * b1 * b3 + 6 * b3 - 4) * A2
            return mpmath.log(ratio) / t + 2 / t * self.atanh(A2) + tail / (2 * b2 ** 2)
        return 4 * a1 * (3 + 1 / (1 - 6 * b1))

    def _f3(self, case):
        a1, b1, a2, b2, a3, b3 = self._abc()
        t = self.t
        if case == 0:
            return mpmath.mpf(0)
        if case == 1:
            return _head(a1, t)
        if case == 2:
            A3 = self.aux(4 * b2)
            const = (11 - 16 * a2 + 6 * b3) / (4 * a1 * b1 * (1 - 2 * a2) ** 2)
            return mpmath.log(2 * b1) / t + 2 / t * self.atanh(A3) - A3 / (2 * b2) + const
        return 8 * b1 ** 3 / (a1 * (1 - 2 * a2) ** 2)

    def _f4(self, case):
        a1, b1, a2, b2, a3, b3 = self._abc()
        t = self.t
        if case == 0:
            return mpmath.mpf(0)
        if case == 1:
            return _head(a3, t)
        if case == 2:
            A4 = self.aux(8 * b2 * b3)
            return _head(a3, t) + 4 / t * self.atanh(A4) + (b2 - a3) / b2 ** 2 * A4
        if case == 3:
            A4 = self.aux(8 * b2 * b3)
            const = (13 + 10 * b1 - 24 * b3) / (32 * b1 ** 2 * b2 ** 3 * (1 + 2 * a2))
            return mpmath.log(1 - 2 * a2 + 2 * b3) / t + 2 / t * self.atanh(A4) - A4 / (4 * b2 * b3) + const
        return (6 * a2 - 2 * b3 - 4) / b2

    def _f5(self, case):
        a1, b1, a2, b2, a3, b3 = self._abc()
        t = self.t
        if case == 0:
            return mpmath.mpf(0)
        if case == 1:
            return _head(b2, t)
        A5 = self.aux(8 * a2 * b2)
        if case == 2:
            return _head(b2, t) + 4 / t * self.atanh(A5) - 4 * b1 * b3 / b2 * A5
        return (
            (mpmath.log(a3 / t) - 1) / t
            + 2 / t * self.atanh(A5)
            - A5 / (4 * a2 * b2)
            + 1 / (2 * a3)
            + (2 * b1 + 1) / a1
        )

    def _abc(self):
        c = self.c
        return c["a1"], c["b1"], c["a2"], c["b2"], c["a3"], c["b3"]


def _check(region: int, t):
    if region not in _THRESHOLDS:
        raise ClosedFormError(f"no closed form for region {region}; regions are 1..5")
    t = mpmath.mpf(t)
    if t <= 0:
        raise ClosedFormError("t must be positive")
    return t


def branch_label(region: int, case: int) -> str:
    bounds = _THRESHOLDS[region]
    if case == 0:
        return f"F{region}: t < t{bounds[0]}"
    if case == len(bounds):
        return f"F{region}: t ≥ t{bounds[-1]}"
    return f"F{region}: t{bounds[case - 1]} ≤ t < t{bounds[case]}"


def branch_of(region: int, t, dps: int = DEFAULT_DPS) -> Tuple[int, str]:
    """Active case number (0 = below support) and its label."""
    with mpmath.workdps(dps):
        ev = _Evaluator(region, _check(region, t))
        return ev.case, ev.label()


def closed_form_region_cdf(region: int, t, dps: int = DEFAULT_DPS) -> mpmath.mpf:
    with mpmath.workdps(dps):
        return +_Evaluator(region, _check(region, t)).value()


def closed_form_cdf(t, dps: int = DEFAULT_DPS) -> mpmath.mpf:
    """(F1 + … + F5)(t) / cot(π/7)."""
    with mpmath.workdps(dps):
        t = _check(1, t)
        total = mpmath.fsum(_Evaluator(i, t).value() for i in REGIONS)
        return +(total * mpmath.tan(mpmath.pi / 7))


# -- comparison against the sweep ----------------------------------------------------

@dataclass
class BranchDeviation:
    region: int
    case: int
    label: str
    samples: int = 0
    max_deviation: float = 0.0
    worst_t: Optional[float] = None

    def record(self, t: float, deviation: float):
        self.samples += 1
        if deviation > self.max_deviation or self.worst_t is None:
            self.max_deviation = max(deviation, self.max_deviation)
            self.worst_t = t


@dataclass
class ClosedFormComparison:
    branches: List[BranchDeviation]
    total_max_deviation: float
    total_worst_t: Optional[float]
    tolerance: float

    @property
    def located(self) -> List[BranchDeviation]:
        return [b for b in self.branches if b.max_deviation > self.tolerance]


def comparison_grid(t_min: float = 0.4, t_max: float = 10.0, samples: int = 200) -> List[float]:
    """Uniform grid plus points just either side of every closed-form breakpoint."""
    if samples < 2 or not 0 < t_min < t_max:
        raise ClosedFormError("grid needs 0 < t_min < t_max and at least two samples")
    step = (t_max - t_min) / (samples - 1)
    points = [t_min + k * step for k in range(samples)]
    for bp in closed_form_breakpoints():
        for offset in (-1e-9, 1e-9):
            value = float(bp) + offset
            if t_min <= value <= t_max:
                points.append(value)
    return sorted(points)


def compare_with_sweep(
    region_cdf: Callable[[int, float], mpmath.mpf],
    cdf: Callable[[float], mpmath.mpf],
    ts: Sequence[float],
    tolerance: float = 1e-6,
) -> ClosedFormComparison:
    """Per-branch max |F_i − sweep area of region i| and the total CDF deviation.

    `region_cdf(i, t)` must return the unnormalized sweep area of the region whose
    winner has index i.
    """
    branches: Dict[Tuple[int, int], BranchDeviation] = {}
    worst, worst_t = 0.0, None
    for t in ts:
        for region in REGIONS:
            case, label = branch_of(region, t)
            entry = branches.setdefault((region, case), BranchDeviation(region, case, label))
            deviation = float(abs(closed_form_region_cdf(region, t) - region_cdf(region, t)))
            entry.record(t, deviation)
        deviation = float(abs(closed_form_cdf(t) - cdf(t)))
        if deviation > worst or worst_t is None:
            worst, worst_t = max(worst, deviation), t
    report = ClosedFormComparison(
        sorted(branches.values(), key=lambda b: (b.region, b.case)), worst, worst_t, tolerance
    )
    for b in report.located:
        log.warning("%s deviates from the sweep by %.3g at t = %.9g", b.label, b.max_deviation, b.worst_t)
    return report

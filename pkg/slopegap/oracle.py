"""Brute-force checks: saddle connections in a cone, empirical renormalized gaps, KS distance,
and a winner oracle that scans every holonomy vector in a box."""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, List, Optional, Tuple, Union

import numpy as np

from slopegap import distribution as dist_mod
from slopegap.distribution import PiecewiseDistribution
from slopegap.explorer import DEFAULT_MAX_NODES, holonomy_vectors
from slopegap.geometry import Vec2, by_slope_then_length
from slopegap.realfield import FieldElement
from slopegap.section import is_left_candidate
from slopegap.surface import StaircaseSurface

log = logging.getLogger(__name__)

DEFAULT_MAX_CONNECTIONS = 200_000
TABLE_POINTS = 4000
TABLE_T_MAX = 1e4

CdfLike = Union[PiecewiseDistribution, Callable[[np.ndarray], np.ndarray]]


class OracleError(Exception):
    pass


@dataclass(frozen=True)
class EmpiricalGaps:
    radius: float
    connections: int
    exact_slopes: Tuple[FieldElement, ...]
    slopes: np.ndarray
    gaps: np.ndarray

    @property
    def min_gap(self) -> float:
        return float(self.gaps.min())


def _radius(surface: StaircaseSurface, radius) -> FieldElement:
    if isinstance(radius, FieldElement):
        value = radius
    else:
        value = surface.field(Fraction(radius))
    if value.sign() <= 0:
        raise OracleError("radius must be positive")
    return value


def enumerate_saddle_connections(
    surface: StaircaseSurface,
    radius,
    threads: int = 1,
    max_connections: int = DEFAULT_MAX_CONNECTIONS,
    max_nodes: int = DEFAULT_MAX_NODES,
) -> List[Vec2]:
    """Holonomy vectors with 0 ≤ y ≤ x ≤ R in original coordinates, by slope then length."""
    R = _radius(surface, radius)
    zero = surface.field.zero
    m, m_inv = surface.shear, surface.shear_inverse
    corners = [m.apply(Vec2(zero, zero)), m.apply(Vec2(R, zero)), m.apply(Vec2(R, R))]
    for c in corners[1:]:
        if c.y.sign() < 0 or (c.y.sign() == 0 and c.x.sign() <= 0):
            raise OracleError("the shear does not map the slope cone into the upper half-plane")
    found = holonomy_vectors(
        surface,
        min(c.x for c in corners),
        max(c.x for c in corners),
        max(c.y for c in corners),
        threads=threads,
        max_nodes=max_nodes,
    )
    cone = []
    for sheared in found:
        v = m_inv.apply(sheared)
        if v.y.sign() >= 0 and v.y <= v.x and v.x <= R:
            cone.append(v)
            if len(cone) > max_connections:
                raise OracleError(
                    f"more than {max_connections} saddle connections at R = {float(R):g}; use a smaller radius"
                )
    cone.sort(key=by_slope_then_length)
    log.info("R = %g: %d saddle connections in the slope cone", float(R), len(cone))
    return cone


def gaps_from_vectors(vectors: Iterable[Vec2], radius) -> EmpiricalGaps:
    """Distinct slopes, sorted exactly, and their gaps scaled by R²."""
    vectors = list(vectors)
    slopes = sorted({v.y / v.x for v in vectors})
    if len(slopes) < 2:
        raise OracleError(f"only {len(slopes)} distinct slopes; increase the radius")
    R = float(radius)
    gaps = np.array([float(b - a) for a, b in zip(slopes, slopes[1:])]) * R * R
    return EmpiricalGaps(
        radius=R,
        connections=len(vectors),
        exact_slopes=tuple(slopes),
        slopes=np.array([float(s) for s in slopes]),
        gaps=gaps,
    )


def empirical_gaps(surface: StaircaseSurface, radius, threads: int = 1) -> EmpiricalGaps:
    emp = gaps_from_vectors(enumerate_saddle_connections(surface, radius, threads), radius)
    log.info("R = %g: %d slopes, min renormalized gap %.6g", emp.radius, emp.slopes.size, emp.min_gap)
    return emp


def gap_histogram(emp: EmpiricalGaps, bins: int = 50, t_max: Optional[float] = None):
    """Density-normalized histogram of the gaps: (densities, bin edges)."""
    upper = t_max if t_max is not None else float(np.quantile(emp.gaps, 0.99))
    return np.histogram(emp.gaps, bins=bins, range=(0.0, upper), density=True)


def uniform_cdf(lo: float, hi: float) -> Callable[[np.ndarray], np.ndarray]:
    if not lo < hi:
        raise OracleError("uniform cdf needs lo < hi")

    def cdf(t):
        return np.clip((np.asarray(t, dtype=np.float64) - lo) / (hi - lo), 0.0, 1.0)

    return cdf


def cdf_table(dist: PiecewiseDistribution, t_max: float = TABLE_T_MAX, points: int = TABLE_POINTS):
    """CDF tabulated on a log-spaced grid with every breakpoint inserted."""
    first = min(bp.decimal for bp in dist.breakpoints)
    ts = np.geomspace(first / 2, t_max, points)
    ts = np.unique(np.concatenate([ts, [bp.decimal for bp in dist.breakpoints if bp.decimal < t_max]]))
    rows = dist_mod.cdf_grid(dist, [float(t) for t in ts], with_pdf=False)
    return ts, np.array([float(value) for _, _, value in rows])


def _as_function(target: CdfLike, t_max: float) -> Callable[[np.ndarray], np.ndarray]:
    if isinstance(target, PiecewiseDistribution):
        ts, values = cdf_table(target, max(t_max, 10.0))
        return lambda t: np.interp(t, ts, values, left=0.0)
    return target


def ks_distance(emp: EmpiricalGaps, target: CdfLike) -> float:
    """sup |empirical CDF − target CDF| over the empirical jump points."""
    return ks_statistic(emp.gaps, target)


def ks_statistic(sample: np.ndarray, target: CdfLike) -> float:
    xs = np.sort(np.asarray(sample, dtype=np.float64))
    n = xs.size
    if n == 0:
        raise OracleError("empty sample")
    f = _as_function(target, float(xs[-1]))(xs)
    upper = np.arange(1, n + 1) / n - f
    lower = f - np.arange(n) / n
    return float(max(upper.max(), lower.max()))


def sample_from_cdf(dist: PiecewiseDistribution, n: int, seed: int = 0) -> np.ndarray:
    """Inverse-transform samples, interpolating the tabulated CDF; the tail beyond the table is c/t."""
    ts, values = cdf_table(dist)
    # left end of every rising step, so the zero plateau ends at the first breakpoint
    keep = np.concatenate([np.diff(values) > 0, [True]])
    ts, values = ts[keep], values[keep]
    u = np.random.default_rng(seed).random(n)
    out = np.interp(u, values, ts)
    t_end, tail = ts[-1], 1.0 - values[-1]
    beyond = u > values[-1]
    out[beyond] = t_end * tail / (1.0 - u[beyond])
    return out


def sheared_box_vectors(surface: StaircaseSurface, length_bound=4, threads: int = 1) -> List[Vec2]:
    """Holonomy vectors of the sheared box [−bound, bound] × [0, bound], in original coordinates."""
    bound = length_bound if isinstance(length_bound, FieldElement) else surface.field(Fraction(length_bound))
    m_inv = surface.shear_inverse
    return [m_inv.apply(d) for d in holonomy_vectors(surface, -bound, bound, bound, threads=threads)]


def least_left_candidate(point: Vec2, vectors: Iterable[Vec2]) -> Vec2:
    candidates = [v for v in vectors if is_left_candidate(v, point)]
    if not candidates:
        raise OracleError(
            f"no left candidate at (a, b) = ({float(point.x):.9g}, {float(point.y):.9g}); use a larger bound"
        )
    return min(candidates, key=by_slope_then_length)


def brute_winner_at(
    point: Vec2, surface: StaircaseSurface, length_bound=4, threads: int = 1
) -> Vec2:
    """Least-slope, then shortest, left candidate among all holonomy vectors in a sheared box."""
    return least_left_candidate(point, sheared_box_vectors(surface, length_bound, threads))

"""Slope-gap distribution from the winner regions: breakpoints, CDF, PDF and volume.

Each region is mapped by (a, b) -> (u, b) with u = b·x − a·y, which makes the
return time y/(b·u). Level sets are hyperbolas u·b = const, so the swept area
of every convex piece reduces to linear terms and logarithms over b-slabs.
"""

import functools
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, List, Sequence, Set, Tuple

import mpmath

from slopegap.geometry import ConvexPolygon, Vec2, area, map_affine
from slopegap.realfield import FieldElement
from slopegap.section import Transversal
from slopegap.subdivision import WinnerRegion

log = logging.getLogger(__name__)

DEFAULT_DPS = 50
VOLUME_TOLERANCE = mpmath.mpf("1e-10")


class DistributionError(Exception):
    pass


class BreakpointPdfError(DistributionError):
    """The density jumps or kinks at a breakpoint; both one-sided values are attached."""

    def __init__(self, t, left, right):
        super().__init__(
            f"pdf is not defined at breakpoint t = {mpmath.nstr(t, 12)}: "
            f"left limit {mpmath.nstr(left, 12)}, right limit {mpmath.nstr(right, 12)}"
        )
        self.t = t
        self.left = left
        self.right = right


@dataclass(frozen=True)
class SweepRegion:
    index: int
    winner: Vec2
    uv_pieces: Tuple[ConvexPolygon, ...]
    scale: FieldElement  # 1/y, the Jacobian of (u, b) -> (a, b)

    def uv_area(self) -> FieldElement:
        total = self.winner.y.field.zero
        for piece in self.uv_pieces:
            total = total + area(piece)
        return total


@dataclass(frozen=True)
class Breakpoint:
    value: FieldElement
    regions: Tuple[int, ...]

    @property
    def decimal(self) -> float:
        return float(self.value)


@dataclass(frozen=True)
class _Slab:
    b_lo: mpmath.mpf
    b_hi: mpmath.mpf
    left: Tuple[mpmath.mpf, mpmath.mpf]  # u = p + q·b
    right: Tuple[mpmath.mpf, mpmath.mpf]


@dataclass(frozen=True)
class RegionVolume:
    index: int
    value: mpmath.mpf
    error: mpmath.mpf


@dataclass(frozen=True)
class VolumeResult:
    value: mpmath.mpf
    error: mpmath.mpf
    regions: Tuple[RegionVolume, ...]
    divergent: bool
    converged: bool


@dataclass
class PiecewiseDistribution:
    breakpoints: Tuple[Breakpoint, ...]
    regions: Tuple[SweepRegion, ...]
    normalizer: FieldElement
    dps: int = DEFAULT_DPS
    threads: int = 1
    _slabs: Tuple[Tuple[_Slab, ...], ...] = field(init=False, repr=False)
    _scales: Tuple[mpmath.mpf, ...] = field(init=False, repr=False)
    _heights: Tuple[mpmath.mpf, ...] = field(init=False, repr=False)
    _norm: mpmath.mpf = field(init=False, repr=False)

    def __post_init__(self):
        with mpmath.workdps(self.dps):
            self._slabs = tuple(
                tuple(s for piece in r.uv_pieces for s in _slabs_of(piece)) for r in self.regions
            )
            self._scales = tuple(r.scale.to_mpf() for r in self.regions)
            # winner heights; evaluation must not touch the global precision from worker threads
            self._heights = tuple(r.winner.y.to_mpf() for r in self.regions)
            self._norm = self.normalizer.to_mpf()


# -- construction ----------------------------------------------------------------

def sweep_region(region: WinnerRegion) -> SweepRegion:
    """Map a winner region to (u, b) coordinates."""
    v = region.vector
    field_ = v.x.field
    pieces = tuple(map_affine(p, -v.y, v.x, field_.zero, field_.one) for p in region.pieces)
    for piece in pieces:
        for pt in piece.vertices:
            if pt.x.sign() < 0 or (pt.x - 1).sign() > 0 or pt.y.sign() < 0 or (pt.y - 1).sign() > 0:
                raise DistributionError(
                    f"region {region.record.index} leaves the unit (u, b) square at ({float(pt.x):.6g}, {float(pt.y):.6g})"
                )
    return SweepRegion(region.record.index, v, pieces, 1 / v.y)


def region_breakpoints(region: SweepRegion) -> Set[FieldElement]:
    """Level values t where u·b = y/t passes a vertex or touches an edge."""
    y = region.winner.y
    values: Set[FieldElement] = set()
    for piece in region.uv_pieces:
        for pt in piece.vertices:
            ub = pt.x * pt.y
            if ub.sign() > 0:
                values.add(y / ub)
        for p, q in piece.edges():
            du, db = q.x - p.x, q.y - p.y
            quad = du * db
            if not quad:
                continue
            lin = p.x * db + p.y * du
            s = -lin / (2 * quad)
            if s.sign() > 0 and (s - 1).sign() < 0:
                extremum = p.x * p.y + s * lin + s * s * quad
                if extremum.sign() > 0:
                    values.add(y / extremum)
    return values


def _exact_order(a: FieldElement, b: FieldElement) -> int:
    return (a - b).sign()


def build_from_regions(
    regions: Sequence[SweepRegion], normalizer: FieldElement, dps: int = DEFAULT_DPS, threads: int = 1
) -> PiecewiseDistribution:
    owners = {}
    for r in regions:
        for value in region_breakpoints(r):
            owners.setdefault(value, []).append(r.index)
    ordered = sorted(owners, key=functools.cmp_to_key(_exact_order))
    breakpoints = tuple(Breakpoint(v, tuple(owners[v])) for v in ordered)
    log.info("%d breakpoints from %d regions", len(breakpoints), len(regions))
    return PiecewiseDistribution(breakpoints, tuple(regions), normalizer, dps, threads)


def build_distribution(
    transversal: Transversal, regions: Sequence[WinnerRegion], dps: int = DEFAULT_DPS, threads: int = 1
) -> PiecewiseDistribution:
    return build_from_regions([sweep_region(r) for r in regions], transversal.area(), dps, threads)


def breakpoints(dist: PiecewiseDistribution) -> List[Breakpoint]:
    return list(dist.breakpoints)


def _slabs_of(piece: ConvexPolygon) -> List[_Slab]:
    """Exact b-slabs of a (u, b) piece with their left and right edge lines, converted to mpf."""
    if piece.is_empty:
        return []
    levels = sorted(set(pt.y for pt in piece.vertices), key=functools.cmp_to_key(_exact_order))
    edges = [(p, q) for p, q in piece.edges() if p.y != q.y]
    slabs = []
    for lo, hi in zip(levels, levels[1:]):
        lines = []
        for p, q in edges:
            b_min, b_max = (p.y, q.y) if p.y < q.y else (q.y, p.y)
            if b_min <= lo and hi <= b_max:
                slope = (q.x - p.x) / (q.y - p.y)
                lines.append((p.x - slope * p.y, slope))
        if len(lines) != 2:
            raise DistributionError(f"slab [{float(lo):.6g}, {float(hi):.6g}] is crossed by {len(lines)} edges")
        mid = (lo + hi) / 2
        (p0, q0), (p1, q1) = lines
        if p0 + q0 * mid > p1 + q1 * mid:
            lines.reverse()
        (pl, ql), (pr, qr) = lines
        slabs.append(
            _Slab(lo.to_mpf(), hi.to_mpf(), (pl.to_mpf(), ql.to_mpf()), (pr.to_mpf(), qr.to_mpf()))
        )
    return slabs


# -- evaluation (callers hold the working precision) -------------------------------

def _roots(p, q, c) -> List:
    """Real roots b of q·b² + p·b − c = 0."""
    if not q:
        return [c / p] if p else []
    disc = p * p + 4 * q * c
    if disc < 0:
        return []
    s = mpmath.sqrt(disc)
    first = (-p - s) / (2 * q) if p >= 0 else (-p + s) / (2 * q)
    if not first:
        return [first]
    return [first, -c / (q * first)]


def _linear(p, q, b1, b2):
    return p * (b2 - b1) + q * (b2 * b2 - b1 * b1) / 2


def _pieces(slab: _Slab, c):
    """Sub-slabs of a slab split where the hyperbola u = c/b meets its edges, with their case."""
    cuts = [slab.b_lo, slab.b_hi]
    for p, q in (slab.left, slab.right):
        cuts.extend(r for r in _roots(p, q, c) if slab.b_lo < r < slab.b_hi)
    cuts.sort()
    (pl, ql), (pr, qr) = slab.left, slab.right
    for b1, b2 in zip(cuts, cuts[1:]):
        if b2 <= b1:
            continue
        mid = (b1 + b2) / 2
        h = c / mid
        if h >= pr + qr * mid:
            continue
        if h <= pl + ql * mid:
            yield "full", b1, b2
        else:
            if b1 <= 0:
                raise DistributionError("hyperbola crossing reached b = 0")
            yield "partial", b1, b2


def _swept_area(slabs: Iterable[_Slab], c):
    """Area of {u·b ≥ c} over the slabs."""
    total = mpmath.mpf(0)
    for slab in slabs:
        (pl, ql), (pr, qr) = slab.left, slab.right
        for case, b1, b2 in _pieces(slab, c):
            if case == "full":
                total += _linear(pr - pl, qr - ql, b1, b2)
            else:
                total += _linear(pr, qr, b1, b2) - c * mpmath.log(b2 / b1)
    return total


def _log_span(slabs: Iterable[_Slab], c):
    total = mpmath.mpf(0)
    for slab in slabs:
        for case, b1, b2 in _pieces(slab, c):
            if case == "partial":
                total += mpmath.log(b2 / b1)
    return total


def _region_cdf_raw(dist: PiecewiseDistribution, i: int, t):
    c = dist._heights[i] / t
    return dist._scales[i] * _swept_area(dist._slabs[i], c)


def _cdf_raw(dist: PiecewiseDistribution, t):
    total = mpmath.mpf(0)
    for i in range(len(dist.regions)):
        total += _region_cdf_raw(dist, i, t)
    return total / dist._norm


def _pdf_raw(dist: PiecewiseDistribution, t):
    total = mpmath.mpf(0)
    for i in range(len(dist.regions)):
        c = dist._heights[i] / t
        total += _log_span(dist._slabs[i], c)
    return total / (t * t * dist._norm)


def _check_t(t):
    t = mpmath.mpf(t)
    if t <= 0:
        raise DistributionError("t must be positive")
    return t


# -- public evaluation ---------------------------------------------------------------

def cdf(dist: PiecewiseDistribution, t) -> mpmath.mpf:
    """Probability that a renormalized gap is at most t."""
    with mpmath.workdps(dist.dps):
        return +_cdf_raw(dist, _check_t(t))


def region_cdf(dist: PiecewiseDistribution, index: int, t) -> mpmath.mpf:
    """Swept (a, b)-area of one region below level t, not normalized."""
    with mpmath.workdps(dist.dps):
        return +_region_cdf_raw(dist, index, _check_t(t))


def pdf(dist: PiecewiseDistribution, t) -> mpmath.mpf:
    """Density of the gap distribution; raises BreakpointPdfError at a breakpoint."""
    with mpmath.workdps(dist.dps):
        t = _check_t(t)
        near = mpmath.mpf(10) ** (-12) * max(1, t)
        for bp in dist.breakpoints:
            if abs(bp.value.to_mpf() - t) <= near:
                step = mpmath.mpf(10) ** (-9)
                raise BreakpointPdfError(t, +_pdf_raw(dist, t - step), +_pdf_raw(dist, t + step))
        return +_pdf_raw(dist, t)


def cdf_grid(dist: PiecewiseDistribution, ts: Sequence, with_pdf: bool = True) -> List[Tuple]:
    """(t, pdf, cdf) rows; pdf at a breakpoint is the right-hand limit."""
    with mpmath.workdps(dist.dps):
        points = [_check_t(t) for t in ts]

        def row(t):
            density = _pdf_raw(dist, t) if with_pdf else None
            return t, density, _cdf_raw(dist, t)

        if dist.threads > 1:
            with ThreadPoolExecutor(max_workers=dist.threads) as pool:
                return list(pool.map(row, points))
        return [row(t) for t in points]


def volume(dist: PiecewiseDistribution, tolerance=VOLUME_TOLERANCE) -> VolumeResult:
    """∬ return time over Ω, region by region, with the quadrature error estimate."""
    tolerance = mpmath.mpf(tolerance)
    for region in dist.regions:
        if _diverges(region):
            log.warning("region %d touches u = 0 or b = 0 along an edge; volume diverges", region.index)
            inf = mpmath.inf
            return VolumeResult(inf, inf, (), divergent=True, converged=False)
    with mpmath.workdps(dist.dps):
        parts = []
        for i, region in enumerate(dist.regions):
            weight = dist._scales[i] * dist._heights[i]
            value, error = mpmath.mpf(0), mpmath.mpf(0)
            for slab in dist._slabs[i]:
                v, e = _slab_volume(slab)
                value += v
                error += e
            parts.append(RegionVolume(region.index, +(weight * value), +(weight * error)))
            log.debug("region %d volume %s ± %s", region.index, mpmath.nstr(value, 15), mpmath.nstr(error, 3))
        total = mpmath.fsum(p.value for p in parts)
        error = mpmath.fsum(p.error for p in parts)
    converged = error <= tolerance
    if not converged:
        log.warning("volume quadrature error %s exceeds %s", mpmath.nstr(error, 3), mpmath.nstr(tolerance, 3))
    log.info("volume %s ± %s", mpmath.nstr(total, 16), mpmath.nstr(error, 3))
    return VolumeResult(total, error, tuple(parts), divergent=False, converged=converged)


def _slab_volume(slab: _Slab):
    (pl, ql), (pr, qr) = slab.left, slab.right

    def integrand(b):
        return mpmath.log((pr + qr * b) / (pl + ql * b)) / b

    value, error = mpmath.quad(integrand, [slab.b_lo, slab.b_hi], error=True)
    return value, error


def _diverges(region: SweepRegion) -> bool:
    for piece in region.uv_pieces:
        for pt in piece.vertices:
            if not pt.x and not pt.y:
                return True
        for p, q in piece.edges():
            if (not p.x and not q.x) or (not p.y and not q.y):
                return True
    return False


# -- integration helpers -----------------------------------------------------------

def integrate_pdf(dist: PiecewiseDistribution, lo, hi, dps: int = 30) -> mpmath.mpf:
    """∫ pdf over [lo, hi], split at the breakpoints inside."""
    with mpmath.workdps(dps):
        lo, hi = _check_t(lo), _check_t(hi)
        nodes = [lo] + [bp.value.to_mpf() for bp in dist.breakpoints if lo < bp.value.to_mpf() < hi] + [hi]
        return +mpmath.quad(lambda t: _pdf_raw(dist, t), nodes)


def pdf_finite_difference(dist: PiecewiseDistribution, t, h="1e-6") -> mpmath.mpf:
    with mpmath.workdps(dist.dps):
        t, h = _check_t(t), mpmath.mpf(h)
        return +((_cdf_raw(dist, t + h) - _cdf_raw(dist, t - h)) / (2 * h))


def distance_to_breakpoint(dist: PiecewiseDistribution, t) -> float:
    return min(abs(float(t) - bp.decimal) for bp in dist.breakpoints)

"""Left winners on the top edge of Ω: the bounded region search, its unbounded fallback, and the sweep."""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Union

from slopegap.geometry import ConvexPolygon, Vec2, by_slope_then_length
from slopegap.realfield import FieldElement
from slopegap.section import (
    Transversal,
    candidacy_interval_left,
    is_left_candidate,
    strip_value,
)
from slopegap.surface import StaircaseSurface, is_holonomy, lattice_box, lattice_values, sort_by_slope

log = logging.getLogger(__name__)


class WinnerError(Exception):
    pass


@dataclass(frozen=True)
class SearchConfig:
    initial_box_margin: Fraction = Fraction(1)
    max_candidates: int = 20_000
    fallback_width_check: bool = True
    seed_box: Fraction = Fraction(2)
    max_seed_box: Fraction = Fraction(16)
    max_iterations: int = 64

    def __post_init__(self):
        if self.initial_box_margin < 1:
            raise WinnerError("initial_box_margin must be at least 1")
        if self.max_candidates <= 0:
            raise WinnerError("max_candidates must be positive")
        if not 0 < self.seed_box <= self.max_seed_box:
            raise WinnerError("seed_box must be positive and at most max_seed_box")
        if self.max_iterations <= 0:
            raise WinnerError("max_iterations must be positive")


@dataclass(frozen=True)
class WinnerRecord:
    index: int
    vector: Vec2
    sheared: Vec2
    a_next: FieldElement
    a_cur: FieldElement
    surface_vector: Vec2

    @property
    def interval(self):
        return self.a_next, self.a_cur


@dataclass(frozen=True)
class BoundedRegion:
    """Triangle (0,0), (1/b, 0), (u,v)/(b·u − a·v) in original coordinates."""

    point: Vec2
    candidate: Vec2
    triangle: ConvexPolygon


@dataclass(frozen=True)
class UnboundedRegion:
    """Strip 0 ≤ b·x − a·y < 1 right of the candidate's line, parallel to the candidate."""

    point: Vec2
    candidate: Vec2


Region = Union[BoundedRegion, UnboundedRegion]


def winner_search_region(point: Vec2, candidate: Vec2) -> Region:
    """Where a holonomy vector must lie to beat `candidate` at `point`."""
    if not is_left_candidate(candidate, point):
        raise WinnerError(f"{candidate!r} is not a left candidate at a = {float(point.x):.9g}")
    field = point.x.field
    a, b = point.x, point.y
    u, v = candidate.x, candidate.y
    denom = b * u - a * v
    if not denom:
        return UnboundedRegion(point, candidate)
    apex = Vec2(u / denom, v / denom)
    triangle = ConvexPolygon.from_points([Vec2(field.zero, field.zero), Vec2(1 / b, field.zero), apex])
    return BoundedRegion(point, candidate, triangle)


def _in_region(v: Vec2, region: Region) -> bool:
    if not is_left_candidate(v, region.point):
        return False
    return region.candidate.cross(v).sign() <= 0


def enumerate_region_candidates(
    region: Region, surface: StaircaseSurface, config: Optional[SearchConfig] = None
) -> List[Vec2]:
    """Holonomy vectors inside a bounded search region, original coordinates, by slope then length."""
    config = config or SearchConfig()
    if isinstance(region, UnboundedRegion):
        raise WinnerError("cannot enumerate an unbounded region")
    if region.triangle.is_empty:
        return []
    m, m_inv = surface.shear, surface.shear_inverse
    corners = [m.apply(p) for p in region.triangle.vertices]
    x_max = max(c.x for c in corners) * config.initial_box_margin
    y_max = max(c.y for c in corners) * config.initial_box_margin
    inside = []
    for lattice_vec in lattice_box(surface, x_max, y_max):
        if lattice_vec.y.sign() <= 0:
            continue
        v = m_inv.apply(lattice_vec)
        if _in_region(v, region):
            inside.append((v, lattice_vec))
            if len(inside) > config.max_candidates:
                raise WinnerError(
                    f"more than {config.max_candidates} lattice candidates in the search region; raise max_candidates"
                )
    holonomies = [v for v, sheared in inside if is_holonomy(surface, sheared)]
    log.debug("region search: %d lattice candidates, %d holonomy vectors", len(inside), len(holonomies))
    return sort_by_slope(holonomies)


def find_seed(
    point: Vec2, surface: StaircaseSurface, config: Optional[SearchConfig] = None, inside: bool = False
) -> Vec2:
    """A holonomy vector that is a left candidate at `point`, from growing lattice boxes.

    With `inside`, candidates on the line b·x = a·y are skipped.
    """
    config = config or SearchConfig()
    field = surface.field
    m_inv = surface.shear_inverse
    bound = config.seed_box
    while bound <= config.max_seed_box:
        side = field(bound)
        candidates = []
        for lattice_vec in lattice_box(surface, side, side):
            if lattice_vec.y.sign() <= 0:
                continue
            v = m_inv.apply(lattice_vec)
            if is_left_candidate(v, point) and not (inside and not strip_value(v, point)):
                candidates.append((v, lattice_vec))
        for v, sheared in sorted(candidates, key=lambda pair: by_slope_then_length(pair[0])):
            if is_holonomy(surface, sheared):
                return v
        bound *= 2
    where = "strictly inside the strip " if inside else ""
    raise WinnerError(
        f"no left candidate holonomy vector {where}within lattice box {config.max_seed_box} at a = {float(point.x):.9g}"
    )


def _unbounded_winner(region: UnboundedRegion, surface: StaircaseSurface, config: SearchConfig) -> Vec2:
    if not config.fallback_width_check:
        raise WinnerError("fallback inconclusive: unbounded search region and the width check is disabled")
    m, m_inv = surface.shear, surface.shear_inverse
    sheared = m.apply(region.candidate)
    # strip lines are vertical after the shear; width is the image of (1/b, 0)
    width = m.a / region.point.y
    smallest_step = min(g for _, g in surface.generators)
    if smallest_step < width:
        raise WinnerError(
            f"fallback inconclusive: generator {float(smallest_step):.6g} fits inside strip width {float(width):.6g}"
        )
    for y in lattice_values(surface, sheared.y):
        if not y:
            continue
        vertical = Vec2(surface.field.zero, y)
        if is_holonomy(surface, vertical):
            return m_inv.apply(vertical)
    raise WinnerError("fallback inconclusive: no vertical holonomy vector below the seed")


def left_winner_at(
    point: Vec2,
    surface: StaircaseSurface,
    transversal: Transversal,
    config: Optional[SearchConfig] = None,
    seed: Optional[Vec2] = None,
) -> Vec2:
    """The least-slope, then shortest, holonomy vector that is a left candidate at `point`."""
    config = config or SearchConfig()
    if not transversal.on_top_edge(point.x) or point.y != 1:
        raise WinnerError(f"point a = {float(point.x):.9g} is not on the top edge")
    if seed is None or not is_left_candidate(seed, point):
        seed = find_seed(point, surface, config)
    region = winner_search_region(point, seed)
    if isinstance(region, UnboundedRegion):
        if not surface.shear.apply(seed).x:
            winner = _unbounded_winner(region, surface, config)
            log.debug("unbounded region at a = %.9g resolved to %r", float(point.x), winner)
            return winner
        # a seed on b·x = a·y bounds nothing unless the shear makes it vertical
        log.debug("seed %r lies on the strip edge at a = %.9g; reseeding", seed, float(point.x))
        seed = find_seed(point, surface, config, inside=True)
        region = winner_search_region(point, seed)
    candidates = enumerate_region_candidates(region, surface, config)
    if not candidates:
        raise WinnerError("search region lost its own seed; check the shear and the lattice")
    return candidates[0]


def sweep_winners(
    surface: StaircaseSurface, transversal: Transversal, config: Optional[SearchConfig] = None
) -> List[WinnerRecord]:
    """Right-to-left sweep of A^L: winners with abutting intervals (a_next, a_cur]."""
    config = config or SearchConfig()
    cusp = transversal.cusp
    c_inv = cusp.C.inverse()
    final = cusp.vector
    records: List[WinnerRecord] = []
    seen = set()
    a = transversal.a_right
    for index in range(1, config.max_iterations + 1):
        point = transversal.top_point(a)
        winner = left_winner_at(point, surface, transversal, config)
        if winner in seen:
            raise WinnerError(f"winner {winner!r} repeated in the sweep; the winner list is inconsistent")
        seen.add(winner)
        a_next = candidacy_interval_left(winner).lo
        done = winner == final or a_next <= transversal.a_left
        if a_next < transversal.a_left:
            a_next = transversal.a_left
        if not a_next < a:
            raise WinnerError(f"sweep made no progress at a = {float(a):.9g}")
        record = WinnerRecord(
            index=index,
            vector=winner,
            sheared=surface.shear.apply(winner),
            a_next=a_next,
            a_cur=a,
            surface_vector=c_inv.apply(winner),
        )
        records.append(record)
        log.info(
            "winner %d: (%.9g, %.9g) on (%.9g, %.9g]",
            index, float(winner.x), float(winner.y), float(a_next), float(a),
        )
        if done:
            return records
        a = a_next
    raise WinnerError(f"sweep did not finish within {config.max_iterations} steps")


def winner_at(records: List[WinnerRecord], a: FieldElement) -> WinnerRecord:
    """The record whose interval (a_next, a_cur] holds a."""
    for record in records:
        if record.a_next < a <= record.a_cur:
            return record
    raise WinnerError(f"a = {float(a):.9g} is outside the swept top edge")

"""Split Ω into winner regions by overlaying candidacy strips with least-slope precedence."""

import logging
from dataclasses import dataclass
from typing import List, Sequence, Tuple

from slopegap.geometry import ConvexPolygon, HalfPlane, SlopeOrder, Vec2, area, clip, slope_less
from slopegap.realfield import FieldElement
from slopegap.section import Transversal
from slopegap.winners import WinnerRecord

log = logging.getLogger(__name__)


class CoverageError(Exception):
    pass


@dataclass(frozen=True)
class WinnerRegion:
    record: WinnerRecord
    pieces: Tuple[ConvexPolygon, ...]

    @property
    def vector(self) -> Vec2:
        return self.record.vector

    def area(self) -> FieldElement:
        field = self.record.vector.x.field
        total = field.zero
        for piece in self.pieces:
            total = total + area(piece)
        return total

    def contains(self, point: Vec2, strict: bool = False) -> bool:
        return any(piece.contains(point, strict) for piece in self.pieces)


def strip_halfplanes(v: Vec2) -> Tuple[HalfPlane, HalfPlane]:
    """{b·x − a·y ≥ 0} and {b·x − a·y ≤ 1} in the (a, b) plane."""
    zero = v.x.field.zero
    return HalfPlane(-v.y, v.x, zero), HalfPlane(v.y, -v.x, zero + 1)


def _outside_strip(pieces: Sequence[ConvexPolygon], w: Vec2) -> List[ConvexPolygon]:
    zero = w.x.field.zero
    below = HalfPlane(w.y, -w.x, zero)  # b·x − a·y ≤ 0
    above = HalfPlane(-w.y, w.x, zero - 1)  # b·x − a·y ≥ 1
    out = []
    for piece in pieces:
        for hp in (below, above):
            part = clip(piece, hp)
            if not part.is_empty:
                out.append(part)
    return out


def _dominates(other: Vec2, v: Vec2) -> bool:
    order = slope_less(other, v)
    if order is SlopeOrder.LESS:
        return True
    return order is SlopeOrder.EQUAL and other.norm2() < v.norm2()


def subdivide(
    transversal: Transversal, records: Sequence[WinnerRecord], check_coverage: bool = True
) -> List[WinnerRegion]:
    """Convex pieces of Ω on which each record's vector is the winner."""
    regions = []
    for record in records:
        v = record.vector
        lower, upper = strip_halfplanes(v)
        pieces = [clip(clip(transversal.omega, lower), upper)]
        pieces = [p for p in pieces if not p.is_empty]
        for other in records:
            if other is not record and _dominates(other.vector, v):
                pieces = _outside_strip(pieces, other.vector)
        regions.append(WinnerRegion(record, tuple(pieces)))
        log.debug("region %d: %d convex pieces", record.index, len(pieces))
    if check_coverage:
        check_covers(transversal, regions)
    log.info("subdivided Ω into %d regions", len(regions))
    return regions


def check_covers(transversal: Transversal, regions: Sequence[WinnerRegion]):
    total = transversal.omega.vertices[0].x.field.zero
    for region in regions:
        total = total + region.area()
    missing = transversal.area() - total
    if missing:
        raise CoverageError(
            f"winner regions leave area {float(missing):.3g} of Ω uncovered; the winner list is incomplete"
        )

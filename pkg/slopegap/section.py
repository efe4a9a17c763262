"""The rotated transversal Ω, its top edge A^L, candidacy predicates and return time.

Points of Ω are (a, b); a holonomy vector v = (x, y) is a candidate at (a, b)
when the linear form b·x − a·y lies in its unit strip.
"""

import dataclasses
import logging
from dataclasses import dataclass

from slopegap.geometry import ConvexPolygon, Vec2, area
from slopegap.realfield import FieldElement
from slopegap.surface import CuspData

log = logging.getLogger(__name__)


class SectionError(Exception):
    pass


@dataclass(frozen=True)
class CandidacyInterval:
    """Half-open interval on the top edge; left convention (lo, hi], otherwise [lo, hi)."""

    lo: FieldElement
    hi: FieldElement
    left: bool = True

    def contains(self, a: FieldElement) -> bool:
        if self.left:
            return self.lo < a <= self.hi
        return self.lo <= a < self.hi


@dataclass(frozen=True)
class Transversal:
    cusp: CuspData
    omega: ConvexPolygon
    a_left: FieldElement
    a_right: FieldElement

    @property
    def apex(self) -> Vec2:
        return Vec2(-1 / self.cusp.y0, self.cusp.y0.field.zero)

    def top_point(self, a) -> Vec2:
        field = self.cusp.y0.field
        return Vec2(field(a), field.one)

    def on_top_edge(self, a: FieldElement) -> bool:
        return self.a_left < a <= self.a_right

    def restricted(self, a_left: FieldElement, a_right: FieldElement) -> "Transversal":
        """Same Ω with A^L shortened to (a_left, a_right]."""
        if not (self.a_left <= a_left < a_right <= self.a_right):
            raise SectionError("restricted top edge must lie inside A^L")
        return dataclasses.replace(self, a_left=a_left, a_right=a_right)

    def area(self) -> FieldElement:
        return area(self.omega)

    def validate(self):
        c = self.cusp
        if self.a_right - self.a_left != c.alpha * c.n:
            raise SectionError("top edge length differs from n·alpha")
        for pt in (self.apex, self.top_point(self.a_left)):
            if strip_value(c.vector, pt) != 1:
                raise SectionError("left edge of Ω is not the line b·x0 − a·y0 = 1")

    @property
    def omega_left_top(self) -> FieldElement:
        return (self.cusp.x0 - 1) / self.cusp.y0


def build_transversal(cusp: CuspData) -> Transversal:
    """Ω with apex (−1/y0, 0) and top edge from (x0 − 1)/y0 to that plus n·alpha."""
    cusp.validate()
    one, zero = cusp.y0.field.one, cusp.y0.field.zero
    a_left = (cusp.x0 - 1) / cusp.y0
    a_right = a_left + cusp.alpha * cusp.n
    omega = ConvexPolygon.from_points(
        [Vec2(-1 / cusp.y0, zero), Vec2(a_right, one), Vec2(a_left, one)]
    )
    t = Transversal(cusp, omega, a_left, a_right)
    t.validate()
    log.debug("transversal top edge (%.9g, %.9g]", float(a_left), float(a_right))
    return t


def strip_value(v: Vec2, point: Vec2) -> FieldElement:
    """b·x − a·y for v = (x, y) at point (a, b)."""
    return point.y * v.x - point.x * v.y


def is_left_candidate(v: Vec2, point: Vec2) -> bool:
    if v.y.sign() <= 0:
        return False
    s = strip_value(v, point)
    return s.sign() >= 0 and (s - 1).sign() < 0


def is_candidate(v: Vec2, point: Vec2) -> bool:
    if v.y.sign() <= 0:
        return False
    s = strip_value(v, point)
    return s.sign() > 0 and (s - 1).sign() <= 0


def candidacy_interval_left(v: Vec2) -> CandidacyInterval:
    """I^L(v) = ((x − 1)/y, x/y]."""
    if v.y.sign() <= 0:
        raise SectionError("candidacy interval needs y > 0")
    return CandidacyInterval((v.x - 1) / v.y, v.x / v.y, left=True)


def candidacy_interval(v: Vec2) -> CandidacyInterval:
    """I(v) = [(x − 1)/y, x/y)."""
    if v.y.sign() <= 0:
        raise SectionError("candidacy interval needs y > 0")
    return CandidacyInterval((v.x - 1) / v.y, v.x / v.y, left=False)


def return_time(v: Vec2, point: Vec2) -> FieldElement:
    """R(a, b) = y / (b·(b·x − a·y))."""
    s = strip_value(v, point)
    if s.sign() <= 0:
        raise SectionError("return time is undefined where b·x − a·y ≤ 0")
    if point.y.sign() <= 0:
        raise SectionError("return time needs b > 0")
    return v.y / (point.y * s)

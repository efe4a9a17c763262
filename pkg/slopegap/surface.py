"""Rectilinear staircase model of a translation surface, its tracer, and the lattice L."""

import functools
import logging
import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Iterator, List, Optional, Sequence, Tuple

from slopegap.geometry import Matrix2, Vec2, compare_slope_then_length
from slopegap.realfield import FieldElement, RealField

log = logging.getLogger(__name__)


class SurfaceError(Exception):
    pass


class TraceResult(Enum):
    EXACT_HIT = "exact_hit"
    EARLY_VERTEX = "early_vertex"
    NO_HIT = "no_hit"


class GluingKind(Enum):
    HORIZONTAL = "horizontal"  # top side of `source` onto bottom side of `target`
    VERTICAL = "vertical"  # right side of `source` onto left side of `target`


@dataclass(frozen=True)
class Rectangle:
    corner: Vec2
    width: FieldElement
    height: FieldElement

    @property
    def x0(self) -> FieldElement:
        return self.corner.x

    @property
    def x1(self) -> FieldElement:
        return self.corner.x + self.width

    @property
    def y0(self) -> FieldElement:
        return self.corner.y

    @property
    def y1(self) -> FieldElement:
        return self.corner.y + self.height

    def contains(self, pt: Vec2) -> bool:
        return self.x0 <= pt.x <= self.x1 and self.y0 <= pt.y <= self.y1

    def corners(self) -> Tuple[Vec2, Vec2, Vec2, Vec2]:
        return (
            Vec2(self.x0, self.y0),
            Vec2(self.x1, self.y0),
            Vec2(self.x1, self.y1),
            Vec2(self.x0, self.y1),
        )


@dataclass(frozen=True)
class Gluing:
    kind: GluingKind
    source: int
    target: int
    source_span: Tuple[FieldElement, FieldElement]
    target_span: Tuple[FieldElement, FieldElement]

    @property
    def label(self) -> str:
        return f"{self.kind.value} gluing {self.source}->{self.target}"


@dataclass(frozen=True)
class CuspData:
    """Cusp normalization: shortest horizontal saddle connection (1, 0) and the companion vector."""

    x0: FieldElement
    y0: FieldElement
    alpha: FieldElement
    n: int
    C: Matrix2

    def validate(self):
        if self.y0.sign() <= 0:
            raise SurfaceError("cusp requires y0 > 0")
        if self.x0.sign() <= 0:
            raise SurfaceError("cusp requires x0 > 0")
        if self.alpha.sign() <= 0:
            raise SurfaceError("cusp requires alpha > 0")
        if self.n not in (1, 2):
            raise SurfaceError(f"cusp n must be 1 or 2, got {self.n}")
        if not self.C.det():
            raise SurfaceError("normalizing matrix C is singular")

    @property
    def vector(self) -> Vec2:
        return Vec2(self.x0, self.y0)


@dataclass
class _Side:
    rect: int
    name: str
    start: FieldElement
    end: FieldElement
    spans: List[Tuple[FieldElement, FieldElement, int]]


class StaircaseSurface:
    """Axis-aligned rectangles glued along their sides, all corners one cone point."""

    def __init__(
        self,
        field: RealField,
        rectangles: Sequence[Rectangle],
        gluings: Sequence[Gluing],
        generators: Sequence[Tuple[str, FieldElement]],
        shear: Matrix2,
        expected_area: Optional[FieldElement] = None,
    ):
        self.field = field
        self.rectangles = tuple(rectangles)
        self.gluings = tuple(gluings)
        self.generators = tuple(generators)
        self.shear = shear
        if not shear.det():
            raise SurfaceError("shear matrix is singular")
        self.shear_inverse = shear.inverse()
        self.expected_area = expected_area

        self._validate_rectangles()
        self.translations = tuple(self._translation(g) for g in self.gluings)
        self.vertices = self._collect_vertices()
        self._vertex_set = frozenset(self.vertices)
        self.rect_vertices = tuple(
            tuple(v for v in self.vertices if r.contains(v)) for r in self.rectangles
        )
        self.top_exits: Tuple[Tuple[int, ...], ...] = self._index(GluingKind.HORIZONTAL, by_source=True)
        self.right_exits: Tuple[Tuple[int, ...], ...] = self._index(GluingKind.VERTICAL, by_source=True)
        self.left_exits: Tuple[Tuple[int, ...], ...] = self._index(GluingKind.VERTICAL, by_source=False)
        self._validate_sides()
        self._validate_lattice()
        self._validate_area()
        self.min_side = min(min(float(r.width), float(r.height)) for r in self.rectangles)
        log.debug(
            "staircase with %d rectangles, %d gluings, %d vertex copies",
            len(self.rectangles), len(self.gluings), len(self.vertices),
        )

    # -- construction-time checks ------------------------------------------------

    def _validate_rectangles(self):
        if not self.rectangles:
            raise SurfaceError("staircase has no rectangles")
        for i, r in enumerate(self.rectangles):
            if r.width.sign() <= 0 or r.height.sign() <= 0:
                raise SurfaceError(f"rectangle {i} has non-positive width or height")
        for g in self.gluings:
            for idx in (g.source, g.target):
                if not 0 <= idx < len(self.rectangles):
                    raise SurfaceError(f"{g.label} references missing rectangle {idx}")
            s_len = g.source_span[1] - g.source_span[0]
            t_len = g.target_span[1] - g.target_span[0]
            if s_len.sign() <= 0 or t_len.sign() <= 0:
                raise SurfaceError(f"{g.label} has an empty span")
            if s_len != t_len:
                raise SurfaceError(
                    f"{g.label} glues segments of different lengths ({float(s_len):.6g} vs {float(t_len):.6g})"
                )

    def _translation(self, g: Gluing) -> Vec2:
        src, dst = self.rectangles[g.source], self.rectangles[g.target]
        shift = g.target_span[0] - g.source_span[0]
        if g.kind is GluingKind.HORIZONTAL:
            return Vec2(shift, dst.y0 - src.y1)
        return Vec2(dst.x0 - src.x1, shift)

    def _sides(self) -> List[_Side]:
        sides = []
        for i, r in enumerate(self.rectangles):
            sides.append(_Side(i, "top", r.x0, r.x1, []))
            sides.append(_Side(i, "bottom", r.x0, r.x1, []))
            sides.append(_Side(i, "right", r.y0, r.y1, []))
            sides.append(_Side(i, "left", r.y0, r.y1, []))
        by_key = {(s.rect, s.name): s for s in sides}
        for k, g in enumerate(self.gluings):
            if g.kind is GluingKind.HORIZONTAL:
                by_key[(g.source, "top")].spans.append((g.source_span[0], g.source_span[1], k))
                by_key[(g.target, "bottom")].spans.append((g.target_span[0], g.target_span[1], k))
            else:
                by_key[(g.source, "right")].spans.append((g.source_span[0], g.source_span[1], k))
                by_key[(g.target, "left")].spans.append((g.target_span[0], g.target_span[1], k))
        return sides

    def _validate_sides(self):
        for side in self._sides():
            spans = sorted(side.spans, key=functools.cmp_to_key(lambda s, t: (s[0] - t[0]).sign()))
            where = f"{side.name} side of rectangle {side.rect}"
            if not spans:
                raise SurfaceError(f"{where} is not glued")
            cursor = side.start
            for lo, hi, k in spans:
                if lo != cursor:
                    gap = "overlaps" if lo < cursor else "leaves a gap before"
                    raise SurfaceError(f"{self.gluings[k].label} {gap} a neighbouring segment on the {where}")
                cursor = hi
            if cursor != side.end:
                raise SurfaceError(f"gluings do not cover the {where} exactly")
        for k, g in enumerate(self.gluings):
            for seg_start, seg_end in self._segments(k):
                for v in self.vertices:
                    if _strictly_inside_segment(v, seg_start, seg_end):
                        raise SurfaceError(f"cone point copy lies inside the segment of {g.label}")

    def _segments(self, k: int) -> Tuple[Tuple[Vec2, Vec2], Tuple[Vec2, Vec2]]:
        g = self.gluings[k]
        src, dst = self.rectangles[g.source], self.rectangles[g.target]
        (s0, s1), (t0, t1) = g.source_span, g.target_span
        if g.kind is GluingKind.HORIZONTAL:
            return (Vec2(s0, src.y1), Vec2(s1, src.y1)), (Vec2(t0, dst.y0), Vec2(t1, dst.y0))
        return (Vec2(src.x1, s0), Vec2(src.x1, s1)), (Vec2(dst.x0, t0), Vec2(dst.x0, t1))

    def _collect_vertices(self) -> Tuple[Vec2, ...]:
        points = set()
        for r in self.rectangles:
            points.update(r.corners())
        for k in range(len(self.gluings)):
            for seg in self._segments(k):
                points.update(seg)
        order = functools.cmp_to_key(lambda p, q: (p.y - q.y).sign() or (p.x - q.x).sign())
        return tuple(sorted(points, key=order))

    def _index(self, kind: GluingKind, by_source: bool) -> Tuple[Tuple[int, ...], ...]:
        table: List[List[int]] = [[] for _ in self.rectangles]
        for k, g in enumerate(self.gluings):
            if g.kind is kind:
                table[g.source if by_source else g.target].append(k)
        return tuple(tuple(row) for row in table)

    def _validate_lattice(self):
        if not self.generators:
            raise SurfaceError("staircase declares no generators")
        for name, g in self.generators:
            if g.sign() <= 0:
                raise SurfaceError(f"generator {name} must be positive")
        base = self.vertices[0]
        for v in self.vertices[1:]:
            for coord in (v.x - base.x, v.y - base.y):
                if self.lattice_coordinates(coord) is None:
                    raise SurfaceError(
                        f"vertex displacement {float(coord):.9g} is not an integer combination of the generators"
                    )

    def _validate_area(self):
        # the staircase is the image of the polygons under the shear
        total = self.area()
        if self.expected_area is None:
            return
        target = self.expected_area * abs(self.shear.det())
        gap = abs((total - target).approx(Fraction(1, 10 ** 12)))
        if gap > Fraction(1, 10 ** 10):
            raise SurfaceError(
                f"staircase area {float(total):.12g} differs from the sheared polygon area {float(target):.12g}"
            )

    # -- queries -------------------------------------------------------------------

    def area(self) -> FieldElement:
        total = self.field.zero
        for r in self.rectangles:
            total = total + r.width * r.height
        return total

    def is_vertex(self, pt: Vec2) -> bool:
        return pt in self._vertex_set

    def lattice_coordinates(self, value: FieldElement) -> Optional[Tuple[int, ...]]:
        """Integer k with value = Σ k_i·l_i, or None."""
        columns = [g.coeffs for _, g in self.generators]
        solution = _solve_rational(columns, value.coeffs)
        if solution is None:
            return None
        if any(c.denominator != 1 for c in solution):
            return None
        return tuple(int(c) for c in solution)

    def rect_starting_at(self, pt: Vec2) -> Optional[int]:
        """The rectangle whose half-open box [x0, x1) × [y0, y1) holds `pt`."""
        for i, r in enumerate(self.rectangles):
            if r.x0 <= pt.x < r.x1 and r.y0 <= pt.y < r.y1:
                return i
        return None

    def step_limit(self, displacement: Vec2) -> int:
        span = abs(float(displacement.x)) + abs(float(displacement.y))
        return int(2 * len(self.rectangles) * span / self.min_side) + 16

    def vertex_between(self, rect: int, p: Vec2, q: Vec2) -> bool:
        """Whether a cone point copy on the closed rectangle lies strictly between p and q."""
        for v in self.rect_vertices[rect]:
            if _strictly_inside_segment(v, p, q):
                return True
        return False


def _strictly_inside_segment(v: Vec2, p: Vec2, q: Vec2) -> bool:
    seg = q - p
    w = v - p
    if w.is_zero() or seg.cross(w).sign() != 0:
        return False
    along = seg.dot(w)
    return along.sign() > 0 and (seg.norm2() - along).sign() > 0


def _solve_rational(columns: Sequence[Sequence[Fraction]], rhs: Sequence[Fraction]) -> Optional[List[Fraction]]:
    """Unique solution of Σ x_j·columns[j] = rhs over Q, or None."""
    m = len(columns)
    rows = [[Fraction(columns[j][i]) for j in range(m)] + [Fraction(rhs[i])] for i in range(len(rhs))]
    pivots = []
    r = 0
    for c in range(m):
        pivot = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if pivot is None:
            raise SurfaceError("generators are linearly dependent over the rationals")
        rows[r], rows[pivot] = rows[pivot], rows[r]
        lead = rows[r][c]
        rows[r] = [x / lead for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                factor = rows[i][c]
                rows[i] = [a - factor * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    if any(row[-1] != 0 for row in rows[r:]):
        return None
    return [rows[i][-1] for i in range(m)]


# -- tracing ---------------------------------------------------------------------

def trace(surface: StaircaseSurface, start_vertex: int, displacement: Vec2) -> TraceResult:
    """Follow the segment `displacement` from a cone point copy across glued sides."""
    d = displacement
    if d.is_zero():
        raise SurfaceError("cannot trace a zero displacement")
    if d.x.sign() < 0 or d.y.sign() < 0:
        raise SurfaceError("tracing needs a displacement with non-negative components")
    p = surface.vertices[start_vertex]
    rect = surface.rect_starting_at(p)
    if rect is None:
        return TraceResult.NO_HIT
    q = p + d
    for _ in range(surface.step_limit(d)):
        r = surface.rectangles[rect]
        beyond_x = q.x > r.x1
        beyond_y = q.y > r.y1
        if not beyond_x and not beyond_y:
            if surface.vertex_between(rect, p, q):
                return TraceResult.EARLY_VERTEX
            return TraceResult.EXACT_HIT if surface.is_vertex(q) else TraceResult.NO_HIT
        seg = q - p
        lam_x = (r.x1 - p.x) / seg.x if beyond_x else None
        lam_y = (r.y1 - p.y) / seg.y if beyond_y else None
        exit_right = lam_y is None or (lam_x is not None and lam_x < lam_y)
        lam = lam_x if exit_right else lam_y
        e = p + seg.scaled(lam)
        if surface.is_vertex(e) or surface.vertex_between(rect, p, e):
            return TraceResult.EARLY_VERTEX
        rect, shift = _cross(surface, rect, e, exit_right)
        p, q = e + shift, q + shift
    raise SurfaceError(f"trace of {d!r} exceeded the step limit; check the gluings")


def _cross(surface: StaircaseSurface, rect: int, e: Vec2, right: bool) -> Tuple[int, Vec2]:
    exits = surface.right_exits[rect] if right else surface.top_exits[rect]
    coord = e.y if right else e.x
    for k in exits:
        lo, hi = surface.gluings[k].source_span
        if lo < coord < hi:
            return surface.gluings[k].target, surface.translations[k]
    side = "right" if right else "top"
    raise SurfaceError(f"no gluing carries the {side} side of rectangle {rect} at {float(coord):.9g}")


def is_holonomy(surface: StaircaseSurface, v: Vec2) -> bool:
    """Whether v (sheared coordinates, first quadrant) is a saddle connection from some cone point copy."""
    if v.is_zero():
        raise SurfaceError("the zero vector is not a holonomy vector")
    for i in range(len(surface.vertices)):
        if trace(surface, i, v) is TraceResult.EXACT_HIT:
            log.debug("holonomy %r found from vertex %d", v, i)
            return True
    return False


# -- generator lattice -----------------------------------------------------------

def lattice_values(surface: StaircaseSurface, bound: FieldElement) -> List[FieldElement]:
    """Distinct values Σ k_i·l_i with k_i ≥ 0 and value ≤ bound, ascending."""
    gens = [g for _, g in surface.generators]
    found = set()

    def walk(i: int, partial: FieldElement):
        if i == len(gens):
            found.add(partial)
            return
        value = partial
        while value <= bound:
            walk(i + 1, value)
            value = value + gens[i]

    if bound.sign() >= 0:
        walk(0, surface.field.zero)
    return sorted(found, key=functools.cmp_to_key(lambda a, b: (a - b).sign()))


def lattice_box(surface: StaircaseSurface, x_max: FieldElement, y_max: FieldElement) -> Iterator[Vec2]:
    xs = lattice_values(surface, x_max)
    ys = lattice_values(surface, y_max)
    for y in ys:
        for x in xs:
            yield Vec2(x, y)


def generate_L(surface: StaircaseSurface, x_max: FieldElement, y_max: FieldElement) -> List[Vec2]:
    """The lattice superset of holonomy vectors in [0, x_max] × [0, y_max], sorted by slope then length."""
    return sort_by_slope(lattice_box(surface, x_max, y_max))


def sort_by_slope(vectors) -> List[Vec2]:
    """Exact slope-then-length order; a float pre-sort keeps exact comparisons to neighbours."""
    items = sorted(vectors, key=_float_key)
    for i in range(1, len(items)):
        j = i
        while j > 0 and compare_slope_then_length(items[j - 1], items[j]) > 0:
            items[j - 1], items[j] = items[j], items[j - 1]
            j -= 1
    return items


def _float_key(v: Vec2) -> Tuple[float, float]:
    x, y = float(v.x), float(v.y)
    if x == 0.0 and y == 0.0:
        return (-1.0, 0.0)
    return (math.atan2(y, x), x * x + y * y)

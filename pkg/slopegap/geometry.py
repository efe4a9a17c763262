"""Exact plane geometry over a RealField: vectors, slope order, half-plane clipping."""

import functools
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, List, Sequence, Tuple, Union

from slopegap.realfield import FieldElement, RealField

Scalar = Union[int, FieldElement]


class GeometryError(Exception):
    pass


class SlopeOrder(Enum):
    LESS = "less"
    EQUAL = "equal"
    GREATER = "greater"


@dataclass(frozen=True)
class Vec2:
    x: FieldElement
    y: FieldElement

    def __add__(self, other: "Vec2") -> "Vec2":
        return Vec2(self.x + other.x, self.y + other.y)

    def __sub__(self, other: "Vec2") -> "Vec2":
        return Vec2(self.x - other.x, self.y - other.y)

    def __neg__(self) -> "Vec2":
        return Vec2(-self.x, -self.y)

    def scaled(self, k) -> "Vec2":
        return Vec2(self.x * k, self.y * k)

    def cross(self, other: "Vec2") -> FieldElement:
        return self.x * other.y - self.y * other.x

    def dot(self, other: "Vec2") -> FieldElement:
        return self.x * other.x + self.y * other.y

    def norm2(self) -> FieldElement:
        return self.dot(self)

    def is_zero(self) -> bool:
        return not self.x and not self.y

    def floats(self) -> Tuple[float, float]:
        return float(self.x), float(self.y)

    def __repr__(self):
        return f"Vec2({float(self.x):.9g}, {float(self.y):.9g})"


def vec(field: RealField, x, y) -> Vec2:
    return Vec2(field(x), field(y))


def slope_less(v1: Vec2, v2: Vec2) -> SlopeOrder:
    """Compare slopes of two vectors with positive y; smaller slope means larger x/y."""
    if v1.y.sign() <= 0 or v2.y.sign() <= 0:
        raise GeometryError("slope comparison needs positive y-components")
    s = (v1.x * v2.y - v2.x * v1.y).sign()
    if s > 0:
        return SlopeOrder.LESS
    if s < 0:
        return SlopeOrder.GREATER
    return SlopeOrder.EQUAL


def compare_slope_then_length(v1: Vec2, v2: Vec2) -> int:
    """Total order on upper half-plane vectors (angle in [0, π)): slope, then length.

    The zero vector sorts first.
    """
    if v1.is_zero() or v2.is_zero():
        return (0 if v1.is_zero() else 1) - (0 if v2.is_zero() else 1)
    c = v1.cross(v2).sign()
    if c == 0 and (v1.dot(v2)).sign() < 0:
        raise GeometryError("opposite vectors have no common slope order")
    if c:
        return -c
    return (v1.norm2() - v2.norm2()).sign()


by_slope_then_length = functools.cmp_to_key(compare_slope_then_length)


@dataclass(frozen=True)
class Matrix2:
    a: FieldElement
    b: FieldElement
    c: FieldElement
    d: FieldElement

    def det(self) -> FieldElement:
        return self.a * self.d - self.b * self.c

    def apply(self, v: Vec2) -> Vec2:
        return Vec2(self.a * v.x + self.b * v.y, self.c * v.x + self.d * v.y)

    def inverse(self) -> "Matrix2":
        det = self.det()
        if not det:
            raise GeometryError("singular matrix has no inverse")
        inv = 1 / det
        return Matrix2(self.d * inv, -self.b * inv, -self.c * inv, self.a * inv)

    def __matmul__(self, other: "Matrix2") -> "Matrix2":
        return Matrix2(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def is_identity(self) -> bool:
        return self.a == 1 and self.b == 0 and self.c == 0 and self.d == 1

    def rows(self) -> Tuple[Tuple[FieldElement, FieldElement], Tuple[FieldElement, FieldElement]]:
        return (self.a, self.b), (self.c, self.d)


def identity(field: RealField) -> Matrix2:
    return Matrix2(field.one, field.zero, field.zero, field.one)


@dataclass(frozen=True)
class HalfPlane:
    """The set {(a, b) : p·a + q·b + r ≥ 0}, or > 0 when strict."""

    p: FieldElement
    q: FieldElement
    r: FieldElement
    strict: bool = False

    def __post_init__(self):
        if not self.p and not self.q:
            raise GeometryError("half-plane needs (p, q) != (0, 0)")

    def value(self, pt: Vec2) -> FieldElement:
        return self.p * pt.x + self.q * pt.y + self.r

    def contains(self, pt: Vec2) -> bool:
        s = self.value(pt).sign()
        return s > 0 if self.strict else s >= 0


@dataclass(frozen=True)
class ConvexPolygon:
    """Counterclockwise vertices in strictly convex position; fewer than three means empty.

    `constraints` records the half-planes a polygon was clipped by; it plays no
    part in equality or area.
    """

    vertices: Tuple[Vec2, ...] = ()
    constraints: Tuple[HalfPlane, ...] = field(default=(), compare=False, repr=False)

    @classmethod
    def from_points(cls, points: Iterable[Vec2], constraints: Tuple[HalfPlane, ...] = ()) -> "ConvexPolygon":
        pts = _prune(list(points))
        if len(pts) < 3:
            return cls((), constraints)
        if _twice_signed_area(pts).sign() < 0:
            pts.reverse()
        return cls(tuple(pts), constraints)

    @property
    def is_empty(self) -> bool:
        return len(self.vertices) < 3

    def edges(self) -> List[Tuple[Vec2, Vec2]]:
        vs = self.vertices
        return [(vs[i], vs[(i + 1) % len(vs)]) for i in range(len(vs))]

    def contains(self, pt: Vec2, strict: bool = False) -> bool:
        if self.is_empty:
            return False
        for p, q in self.edges():
            s = (q - p).cross(pt - p).sign()
            if s < 0 or (strict and s == 0):
                return False
        return True


def _twice_signed_area(pts: Sequence[Vec2]):
    total = 0
    for i, p in enumerate(pts):
        total = total + p.cross(pts[(i + 1) % len(pts)])
    return total


def _prune(pts: List[Vec2]) -> List[Vec2]:
    """Drop repeated and collinear vertices from a closed polygon chain."""
    while True:
        pts = [p for i, p in enumerate(pts) if i == 0 or p != pts[i - 1]]
        while len(pts) > 1 and pts[0] == pts[-1]:
            pts.pop()
        if len(pts) < 3:
            return pts
        for i, p in enumerate(pts):
            prev, nxt = pts[i - 1], pts[(i + 1) % len(pts)]
            if (p - prev).cross(nxt - p).sign() == 0:
                del pts[i]
                break
        else:
            return pts


def clip(poly: ConvexPolygon, hp: HalfPlane) -> ConvexPolygon:
    """Exact intersection of a convex polygon with a closed half-plane."""
    if poly.is_empty:
        return poly
    out: List[Vec2] = []
    verts = poly.vertices
    prev = verts[-1]
    prev_val = hp.value(prev)
    prev_in = prev_val.sign() >= 0
    for cur in verts:
        cur_val = hp.value(cur)
        cur_in = cur_val.sign() >= 0
        if cur_in:
            if not prev_in:
                out.append(_crossing(prev, cur, prev_val, cur_val))
            out.append(cur)
        elif prev_in:
            out.append(_crossing(prev, cur, prev_val, cur_val))
        prev, prev_val, prev_in = cur, cur_val, cur_in
    return ConvexPolygon.from_points(out, poly.constraints + (hp,))


def _crossing(p: Vec2, q: Vec2, fp: FieldElement, fq: FieldElement) -> Vec2:
    t = fp / (fp - fq)
    return p + (q - p).scaled(t)


def area(poly: ConvexPolygon) -> Scalar:
    """Shoelace area; 0 for the empty polygon."""
    if poly.is_empty:
        return 0
    return _twice_signed_area(poly.vertices) / 2


def map_affine(
    poly: ConvexPolygon,
    m11: Scalar,
    m12: Scalar,
    m21: Scalar,
    m22: Scalar,
    t1: Scalar = 0,
    t2: Scalar = 0,
) -> ConvexPolygon:
    """Image under v -> [[m11, m12], [m21, m22]]·v + (t1, t2), counterclockwise again."""
    if m11 * m22 - m12 * m21 == 0:
        raise GeometryError("singular affine map")
    if poly.is_empty:
        return poly
    image = [
        Vec2(m11 * v.x + m12 * v.y + t1, m21 * v.x + m22 * v.y + t2)
        for v in poly.vertices
    ]
    return ConvexPolygon.from_points(image)


"""Visibility unfolding of a staircase: all saddle connections inside a box.

Every cone point copy opens one sector per rectangle it touches. A sector is
a wedge of upward directions; it is narrowed through each glued side it
crosses and the first cone point seen along each ray is recorded. Vectors are
in sheared (staircase) coordinates, directions with angle in [0, π).
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import List, Optional, Set

from slopegap.geometry import Vec2
from slopegap.realfield import FieldElement
from slopegap.surface import StaircaseSurface, SurfaceError, sort_by_slope

log = logging.getLogger(__name__)

DEFAULT_MAX_NODES = 5_000_000


def _half(d: Vec2) -> int:
    s = d.y.sign()
    return 0 if s > 0 or (s == 0 and d.x.sign() > 0) else 1


def angle_cmp(d1: Vec2, d2: Vec2) -> int:
    """Order of two non-zero directions by angle in [0, 2π)."""
    h1, h2 = _half(d1), _half(d2)
    if h1 != h2:
        return -1 if h1 < h2 else 1
    return -d1.cross(d2).sign()


@dataclass(frozen=True)
class Wedge:
    lo: Vec2
    hi: Vec2
    lo_closed: bool
    hi_closed: bool

    def contains(self, d: Vec2) -> bool:
        c = angle_cmp(self.lo, d)
        if c > 0 or (c == 0 and not self.lo_closed):
            return False
        c = angle_cmp(d, self.hi)
        return c < 0 or (c == 0 and self.hi_closed)

    def narrowed(self, lo: Vec2, lo_closed: bool, hi: Vec2, hi_closed: bool) -> Optional["Wedge"]:
        c = angle_cmp(self.lo, lo)
        if c > 0:
            lo, lo_closed = self.lo, self.lo_closed
        elif c == 0:
            lo_closed = lo_closed and self.lo_closed
        c = angle_cmp(self.hi, hi)
        if c < 0:
            hi, hi_closed = self.hi, self.hi_closed
        elif c == 0:
            hi_closed = hi_closed and self.hi_closed
        c = angle_cmp(lo, hi)
        if c < 0 or (c == 0 and lo_closed and hi_closed):
            return Wedge(lo, hi, lo_closed, hi_closed)
        return None


@dataclass(frozen=True)
class Sector:
    rect: int
    origin: Vec2
    wedge: Wedge


@dataclass(frozen=True)
class Box:
    x_lo: FieldElement
    x_hi: FieldElement
    y_hi: FieldElement

    def holds(self, d: Vec2) -> bool:
        return self.x_lo <= d.x <= self.x_hi and d.y <= self.y_hi


def start_sectors(surface: StaircaseSurface) -> List[Sector]:
    field = surface.field
    east = Vec2(field.one, field.zero)
    north = Vec2(field.zero, field.one)
    west = Vec2(-field.one, field.zero)
    sectors = []
    for v in surface.vertices:
        for i, r in enumerate(surface.rectangles):
            if not r.contains(v) or v.y == r.y1:
                continue
            if v.x == r.x0:
                wedge = Wedge(east, north, True, True)
            elif v.x == r.x1:
                wedge = Wedge(north, west, True, False)
            else:
                wedge = Wedge(east, west, True, False)
            sectors.append(Sector(i, v, wedge))
    return sectors


def _visible_vertices(surface: StaircaseSurface, node: Sector, box: Box) -> List[Vec2]:
    seen: List[Vec2] = []
    for v in surface.rect_vertices[node.rect]:
        d = v - node.origin
        if d.is_zero() or not node.wedge.contains(d):
            continue
        for k, other in enumerate(seen):
            if other.cross(d).sign() == 0:
                if d.norm2() < other.norm2():
                    seen[k] = d
                break
        else:
            seen.append(d)
    return [d for d in seen if box.holds(d)]


def _pruned(box: Box, wedge: Wedge, p: Vec2, q: Vec2) -> bool:
    if p.y > box.y_hi and q.y > box.y_hi:
        return True
    if wedge.hi.x.sign() >= 0 and p.x > box.x_hi and q.x > box.x_hi:
        return True
    if wedge.lo.x.sign() <= 0 and p.x < box.x_lo and q.x < box.x_lo:
        return True
    return False


def _children(surface: StaircaseSurface, node: Sector, box: Box) -> List[Sector]:
    r = surface.rectangles[node.rect]
    o = node.origin
    out = []
    if o.y < r.y1:
        for k in surface.top_exits[node.rect]:
            g = surface.gluings[k]
            left = Vec2(g.source_span[0], r.y1) - o
            right = Vec2(g.source_span[1], r.y1) - o
            sub = node.wedge.narrowed(right, False, left, False)
            if sub is not None and not _pruned(box, sub, left, right):
                out.append(Sector(g.target, o + surface.translations[k], sub))
    if o.x < r.x1:
        for k in surface.right_exits[node.rect]:
            g = surface.gluings[k]
            lo, hi = g.source_span
            if hi <= o.y:
                continue
            clamped = lo < o.y
            low = Vec2(r.x1, o.y if clamped else lo) - o
            high = Vec2(r.x1, hi) - o
            sub = node.wedge.narrowed(low, clamped, high, False)
            if sub is not None and not _pruned(box, sub, low, high):
                out.append(Sector(g.target, o + surface.translations[k], sub))
    if o.x > r.x0:
        for k in surface.left_exits[node.rect]:
            g = surface.gluings[k]
            lo, hi = g.target_span
            if hi <= o.y:
                continue
            clamped = lo < o.y
            low = Vec2(r.x0, o.y if clamped else lo) - o
            high = Vec2(r.x0, hi) - o
            sub = node.wedge.narrowed(high, False, low, clamped)
            if sub is not None and not _pruned(box, sub, low, high):
                out.append(Sector(g.source, o - surface.translations[k], sub))
    return out


def unfold_sector(
    surface: StaircaseSurface, sector: Sector, box: Box, max_nodes: int = DEFAULT_MAX_NODES
) -> Set[Vec2]:
    found: Set[Vec2] = set()
    stack = [sector]
    nodes = 0
    while stack:
        node = stack.pop()
        nodes += 1
        if nodes > max_nodes:
            raise SurfaceError(f"visibility unfolding passed {max_nodes} nodes; shrink the search box")
        found.update(_visible_vertices(surface, node, box))
        stack.extend(_children(surface, node, box))
    return found


def holonomy_vectors(
    surface: StaircaseSurface,
    x_lo: FieldElement,
    x_hi: FieldElement,
    y_hi: FieldElement,
    threads: int = 1,
    max_nodes: int = DEFAULT_MAX_NODES,
) -> List[Vec2]:
    """Holonomy vectors d with angle in [0, π), x_lo ≤ d.x ≤ x_hi and d.y ≤ y_hi, sorted by slope."""
    box = Box(x_lo, x_hi, y_hi)
    sectors = start_sectors(surface)

    def run(sector: Sector) -> Set[Vec2]:
        return unfold_sector(surface, sector, box, max_nodes)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(run, sectors))
    else:
        results = [run(s) for s in sectors]
    merged: Set[Vec2] = set()
    for part in results:
        merged.update(part)
    log.info("unfolded %d sectors: %d holonomy vectors in box", len(sectors), len(merged))
    return sort_by_slope(merged)

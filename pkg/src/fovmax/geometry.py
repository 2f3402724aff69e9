"""Planar primitives shared by the whole package.

Conventions:

* angles are radians, coordinates are unitless Cartesian floats
* sectors and half-planes are CLOSED sets, so points on a boundary ray
  count as inside
* a sector with apex C, direction theta and opening phi is swept
  counter-clockwise from its right boundary ray (angle theta) to its left
  boundary ray (angle theta + phi); it is the intersection of two closed
  half-planes, which requires opening < pi
* convex polygons are counter-clockwise and validated on construction;
  invalid input raises instead of being silently repaired
"""

from __future__ import annotations

import enum
import math
from typing import Iterable, Optional, Sequence, Tuple

Point = Tuple[float, float]

TWO_PI = 2.0 * math.pi

# Absolute tolerance for orientation (cross product) tests, documented as a
# library constant. Coordinates are assumed to be of moderate magnitude.
ORIENT_EPS = 1e-12


class InvalidInputError(ValueError):
    """Input violates a documented invariant (bad polygon, angle range...)."""


class UnsupportedSceneError(RuntimeError):
    """Structurally valid input that is outside the supported problem class."""


class NearSingularError(ArithmeticError):
    """A closed-form denominator is too close to zero to be trusted."""


def normalize_angle(a: float) -> float:
    """Map an angle to its canonical representative in [0, 2*pi)."""
    r = math.fmod(a, TWO_PI)
    if r < 0.0:
        r += TWO_PI
    if r >= TWO_PI:
        r = 0.0
    return r


def wrap_to_pi(a: float) -> float:
    """Map an angle to the balanced representative in [-pi, pi]."""
    return math.remainder(a, TWO_PI)


def cross(o: Point, a: Point, b: Point) -> float:
    """z component of (a - o) x (b - o)."""
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def _finite(*vals: float) -> bool:
    return all(math.isfinite(v) for v in vals)


class Line:
    """Infinite line stored as an anchor point plus a unit direction.

    Storing a direction vector instead of a slope keeps vertical lines
    unexceptional; slope angles are derived on demand.
    """

    __slots__ = ("px", "py", "dx", "dy")

    def __init__(self, point: Point, direction: Point):
        px, py = float(point[0]), float(point[1])
        dx, dy = float(direction[0]), float(direction[1])
        if not _finite(px, py, dx, dy):
            raise InvalidInputError("line coordinates must be finite")
        norm = math.hypot(dx, dy)
        if norm == 0.0:
            raise InvalidInputError("line direction must be nonzero")
        self.px, self.py = px, py
        self.dx, self.dy = dx / norm, dy / norm

    @classmethod
    def from_point_angle(cls, point: Point, angle: float) -> "Line":
        return cls(point, (math.cos(angle), math.sin(angle)))

    @classmethod
    def from_points(cls, a: Point, b: Point) -> "Line":
        return cls(a, (b[0] - a[0], b[1] - a[1]))

    def angle(self) -> float:
        """Direction angle in [0, 2*pi)."""
        return normalize_angle(math.atan2(self.dy, self.dx))

    def side(self, p: Point) -> float:
        """Signed offset of p; positive on the left of the direction."""
        return self.dx * (p[1] - self.py) - self.dy * (p[0] - self.px)

    def __repr__(self) -> str:
        return f"Line(({self.px:g}, {self.py:g}), ({self.dx:g}, {self.dy:g}))"


def as_line(obj) -> Line:
    """Accept a Line or a (point, angle) pair."""
    if isinstance(obj, Line):
        return obj
    point, angle = obj
    return Line.from_point_angle(point, float(angle))


def shoelace_area(poly) -> float:
    """Signed shoelace area; positive for counter-clockwise input.

    Accepts a ConvexPolygon or any sequence of points. Repeated consecutive
    points contribute nothing, so degenerate quadrilaterals are fine.
    """
    pts = poly.vertices if isinstance(poly, ConvexPolygon) else list(poly)
    n = len(pts)
    acc = 0.0
    for i in range(n):
        x0, y0 = pts[i]
        x1, y1 = pts[(i + 1) % n]
        acc += x0 * y1 - x1 * y0
    return 0.5 * acc


class ConvexPolygon:
    """Convex polygon with counter-clockwise vertices.

    Construction validates: at least 3 vertices, finite coordinates, no
    duplicate consecutive vertices, counter-clockwise orientation, convex
    turns (collinear triples are tolerated) and strictly positive area.
    """

    __slots__ = ("vertices", "_area")

    def __init__(self, vertices: Sequence[Point], _validate: bool = True):
        vs = tuple((float(p[0]), float(p[1])) for p in vertices)
        if _validate:
            self._validate(vs)
        self.vertices = vs
        self._area: Optional[float] = None

    @staticmethod
    def _validate(vs: Tuple[Point, ...]) -> None:
        if len(vs) < 3:
            raise InvalidInputError("polygon needs at least 3 vertices")
        for x, y in vs:
            if not _finite(x, y):
                raise InvalidInputError("polygon coordinates must be finite")
        n = len(vs)
        for i in range(n):
            if vs[i] == vs[(i + 1) % n]:
                raise InvalidInputError("polygon has duplicate consecutive vertices")
        area = shoelace_area(vs)
        if area < 0.0:
            raise InvalidInputError("polygon not counter-clockwise")
        if area <= ORIENT_EPS:
            raise InvalidInputError("polygon area not strictly positive")
        for i in range(n):
            turn = cross(vs[i], vs[(i + 1) % n], vs[(i + 2) % n])
            if turn < -ORIENT_EPS:
                raise InvalidInputError("polygon not convex")

    @property
    def area(self) -> float:
        if self._area is None:
            self._area = shoelace_area(self.vertices)
        return self._area

    def __len__(self) -> int:
        return len(self.vertices)

    def edge(self, i: int) -> Tuple[Point, Point]:
        """Edge i runs from vertex i to vertex i+1 (cyclic)."""
        return self.vertices[i], self.vertices[(i + 1) % len(self.vertices)]

    def edge_line(self, i: int) -> Line:
        a, b = self.edge(i)
        return Line.from_points(a, b)

    def centroid(self) -> Point:
        xs = sum(v[0] for v in self.vertices) / len(self.vertices)
        ys = sum(v[1] for v in self.vertices) / len(self.vertices)
        return (xs, ys)

    def contains(self, p: Point, tol: float = ORIENT_EPS) -> bool:
        """Closed containment test (boundary counts as inside)."""
        vs = self.vertices
        n = len(vs)
        for i in range(n):
            if cross(vs[i], vs[(i + 1) % n], p) < -tol:
                return False
        return True

    def __repr__(self) -> str:
        return f"ConvexPolygon({list(self.vertices)!r})"


class Sector:
    """Closed planar sector: apex, direction of the right boundary ray and
    opening angle in (0, pi)."""

    __slots__ = ("apex", "direction", "opening")

    def __init__(self, apex: Point, direction: float, opening: float):
        ax, ay = float(apex[0]), float(apex[1])
        direction = float(direction)
        opening = float(opening)
        if not _finite(ax, ay, direction, opening):
            raise InvalidInputError("sector parameters must be finite")
        if not (0.0 < opening < math.pi):
            raise InvalidInputError("sector opening must lie in (0, pi)")
        self.apex = (ax, ay)
        self.direction = direction
        self.opening = opening

    def contains(self, p: Point, tol: float = ORIENT_EPS) -> bool:
        ax, ay = self.apex
        vx, vy = p[0] - ax, p[1] - ay
        t = self.direction
        # left of the right ray and right of the left ray, both closed
        if math.cos(t) * vy - math.sin(t) * vx < -tol:
            return False
        t2 = t + self.opening
        if math.cos(t2) * vy - math.sin(t2) * vx > tol:
            return False
        return True

    def __repr__(self) -> str:
        return f"Sector(apex={self.apex}, direction={self.direction:g}, opening={self.opening:g})"


class IntersectionKind(enum.Enum):
    CONTAINS = "contains"
    FULLY_INTERSECTS = "fully_intersects"
    PARTIALLY_INTERSECTS = "partially_intersects"
    NO_INTERSECTION = "no_intersection"


def vertex_angle(apex: Point, p: Point) -> float:
    """Angle in [0, 2*pi) of the ray apex -> p."""
    dx, dy = p[0] - apex[0], p[1] - apex[1]
    if dx == 0.0 and dy == 0.0:
        raise InvalidInputError("vertex_angle of coincident points")
    return normalize_angle(math.atan2(dy, dx))


def ray_line_intersection(apex: Point, direction: float, line) -> Optional[Point]:
    """Intersection of the half-line from apex at the given angle with a line.

    Returns None for a parallel line or an intersection strictly behind the
    apex. A ray starting on the line returns the apex itself.
    """
    ln = as_line(line)
    ux, uy = math.cos(direction), math.sin(direction)
    denom = ux * ln.dy - uy * ln.dx
    if abs(denom) <= ORIENT_EPS:
        return None
    wx, wy = ln.px - apex[0], ln.py - apex[1]
    t = (wx * ln.dy - wy * ln.dx) / denom
    if t < -ORIENT_EPS:
        return None
    if t < 0.0:
        t = 0.0
    return (apex[0] + t * ux, apex[1] + t * uy)


def _dedupe_ring(pts: Sequence[Point], tol: float) -> list:
    out: list = []
    for p in pts:
        if out and abs(p[0] - out[-1][0]) <= tol and abs(p[1] - out[-1][1]) <= tol:
            continue
        out.append(p)
    while len(out) > 1 and abs(out[0][0] - out[-1][0]) <= tol and abs(out[0][1] - out[-1][1]) <= tol:
        out.pop()
    return out


def clip_halfplane(poly: ConvexPolygon, line, keep_left: bool = True) -> Optional[ConvexPolygon]:
    """Clip a convex polygon against one closed half-plane.

    Returns the clipped polygon, or None when the result is empty or has
    zero area. The output is trusted convex (no re-validation), since
    half-plane clipping preserves convexity up to rounding.
    """
    ln = as_line(line)
    sgn = 1.0 if keep_left else -1.0
    vs = poly.vertices
    n = len(vs)
    sides = [sgn * ln.side(v) for v in vs]
    out: list = []
    for i in range(n):
        j = (i + 1) % n
        si, sj = sides[i], sides[j]
        vi, vj = vs[i], vs[j]
        inside_i = si >= -ORIENT_EPS
        inside_j = sj >= -ORIENT_EPS
        if inside_i:
            out.append(vi)
        if inside_i != inside_j:
            t = si / (si - sj)
            out.append((vi[0] + t * (vj[0] - vi[0]), vi[1] + t * (vj[1] - vi[1])))
    if len(out) < 3:
        return None
    scale = max(1.0, max(max(abs(x), abs(y)) for x, y in out))
    out = _dedupe_ring(out, 1e-13 * scale)
    if len(out) < 3:
        return None
    if shoelace_area(out) <= 1e-14 * scale * scale:
        return None
    return ConvexPolygon(out, _validate=False)


def sector_clip(poly: ConvexPolygon, s: Sector) -> Optional[ConvexPolygon]:
    """Intersection of a convex polygon with a closed sector.

    The sector is realized as two half-plane clips: left of the right
    boundary ray's supporting line, right of the left boundary ray's.
    Returns None when the intersection is empty or has zero area.
    """
    right = Line.from_point_angle(s.apex, s.direction)
    clipped = clip_halfplane(poly, right, keep_left=True)
    if clipped is None:
        return None
    left = Line.from_point_angle(s.apex, s.direction + s.opening)
    return clip_halfplane(clipped, left, keep_left=False)


def ray_hits_polygon(poly: ConvexPolygon, apex: Point, direction: float) -> bool:
    """Closed test: does the half-line from apex meet the polygon boundary?"""
    ux, uy = math.cos(direction), math.sin(direction)
    slack = 1e-9
    for i in range(len(poly)):
        a, b = poly.edge(i)
        ex, ey = b[0] - a[0], b[1] - a[1]
        wx, wy = a[0] - apex[0], a[1] - apex[1]
        denom = ux * ey - uy * ex
        if abs(denom) > ORIENT_EPS:
            t = (wx * ey - wy * ex) / denom
            s = (wx * uy - wy * ux) / denom
            if t >= -slack and -slack <= s <= 1.0 + slack:
                return True
        else:
            # parallel; overlapping only if the edge is collinear with the ray
            if abs(wx * uy - wy * ux) <= ORIENT_EPS:
                ta = wx * ux + wy * uy
                tb = (b[0] - apex[0]) * ux + (b[1] - apex[1]) * uy
                if max(ta, tb) >= -slack:
                    return True
    return False


def classify(poly: ConvexPolygon, s: Sector) -> IntersectionKind:
    """Classify the polygon/sector intersection under the closed convention.

    Contains wins over FullyIntersects when both predicates hold (a sector
    exactly spanning the polygon touches vertices with both rays while
    containing every vertex).
    """
    if poly.contains(s.apex):
        raise UnsupportedSceneError("apex inside or on polygon")
    if all(s.contains(v) for v in poly.vertices):
        return IntersectionKind.CONTAINS
    hit_right = ray_hits_polygon(poly, s.apex, s.direction)
    hit_left = ray_hits_polygon(poly, s.apex, s.direction + s.opening)
    if hit_right and hit_left:
        return IntersectionKind.FULLY_INTERSECTS
    if hit_right or hit_left:
        return IntersectionKind.PARTIALLY_INTERSECTS
    return IntersectionKind.NO_INTERSECTION


def angular_span(poly: ConvexPolygon, apex: Point) -> Tuple[float, float]:
    """Smallest closed angle interval [lo, hi] containing every vertex ray.

    Angles are unwrapped around the apex-to-centroid direction so a polygon
    straddling the 0/2pi seam still yields a contiguous interval; lo and hi
    are plain reals with hi - lo < pi for an apex outside the polygon.
    """
    if poly.contains(apex):
        raise UnsupportedSceneError("apex inside or on polygon")
    cx, cy = poly.centroid()
    mu = math.atan2(cy - apex[1], cx - apex[0])
    lo = math.inf
    hi = -math.inf
    for v in poly.vertices:
        off = wrap_to_pi(vertex_angle(apex, v) - mu)
        lo = min(lo, off)
        hi = max(hi, off)
    return (mu + lo, mu + hi)


def overlap_interval(base: Tuple[float, float], other: Tuple[float, float]) -> Optional[Tuple[float, float]]:
    """Intersect two angle intervals, shifting `other` by a whole number of
    turns to best overlap `base`. Returns None when they stay disjoint."""
    a, b = base
    c, d = other
    if d < c:
        raise InvalidInputError("interval endpoints out of order")
    k = round(((a + b) - (c + d)) / (2.0 * TWO_PI))
    best = None
    for kk in (k - 1, k, k + 1):
        lo = max(a, c + kk * TWO_PI)
        hi = min(b, d + kk * TWO_PI)
        if hi > lo and (best is None or hi - lo > best[1] - best[0]):
            best = (lo, hi)
    return best

"""Vertex partitioning of a convex polygon as seen from an outside apex.

Rays from the apex through the polygon's vertices split the polygon's
angular span into sections. Inside one section every ray enters the
polygon through the same near edge and leaves through the same far edge,
so each section behaves like a fixed wedge. Rotating a sector of opening
phi, the combinatorial structure (which section holds each boundary ray,
which sections are fully covered) only changes when a boundary ray crosses
a vertex ray: the breakpoints are the vertex ray angles merged with the
same angles shifted by -phi. Between consecutive breakpoints the covered
middle area is constant and only the two boundary sections contribute
moving terms.

All per-scene angles live on a continuous unwrapped axis anchored at the
apex-to-centroid direction, so polygons straddling the 0/2pi seam need no
special casing; results are mapped back to [0, 2pi) at the solver surface.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass
from typing import List, NamedTuple, Optional, Sequence, Tuple

from .geometry import (
    ConvexPolygon,
    InvalidInputError,
    Line,
    Point,
    UnsupportedSceneError,
    shoelace_area,
    vertex_angle,
    wrap_to_pi,
)
from .wedge import StaticWedge, wedge_from_lines

_ANGLE_MERGE = 1e-12


class AngularOrder(NamedTuple):
    sorted_angles: Tuple[float, ...]
    vertex_order: Tuple[int, ...]


def _unwrapped_angles(poly: ConvexPolygon, apex: Point) -> List[float]:
    cx, cy = poly.centroid()
    mu = math.atan2(cy - apex[1], cx - apex[0])
    return [mu + wrap_to_pi(vertex_angle(apex, v) - mu) for v in poly.vertices]


def angular_order(poly: ConvexPolygon, apex: Point) -> AngularOrder:
    """Vertex rays sorted by angle, with collinear rays merged.

    Vertices whose rays coincide within 1e-12 rad share one entry; the
    vertex nearer to the apex represents the merged ray. Raises when the
    apex is inside or on the polygon.
    """
    if poly.contains(apex):
        raise UnsupportedSceneError("apex inside or on polygon")
    angles = _unwrapped_angles(poly, apex)
    order = sorted(range(len(angles)), key=lambda i: angles[i])

    def dist2(i: int) -> float:
        vx, vy = poly.vertices[i]
        return (vx - apex[0]) ** 2 + (vy - apex[1]) ** 2

    sorted_angles: List[float] = []
    reps: List[int] = []
    for i in order:
        if sorted_angles and angles[i] - sorted_angles[-1] <= _ANGLE_MERGE:
            if dist2(i) < dist2(reps[-1]):
                reps[-1] = i
            continue
        sorted_angles.append(angles[i])
        reps.append(i)
    return AngularOrder(tuple(sorted_angles), tuple(reps))


def _ray_groups(poly: ConvexPolygon, apex: Point, sorted_angles: Sequence[float]) -> List[int]:
    """Ray index for every polygon vertex (nearest sorted angle)."""
    angles = _unwrapped_angles(poly, apex)
    out = []
    for a in angles:
        j = min(range(len(sorted_angles)), key=lambda k: abs(sorted_angles[k] - a))
        if abs(sorted_angles[j] - a) > 1e-9:
            raise InvalidInputError("vertex ray does not match any sorted angle")
        out.append(j)
    return out


def _walk_chain(
    poly: ConvexPolygon,
    ray_of: Sequence[int],
    start: int,
    last_ray: int,
    step: int,
) -> List[int]:
    """Follow polygon indices from start (step -1 = clockwise, +1 = ccw)
    until a vertex on the last ray is reached."""
    n = len(poly)
    chain = [start]
    cur = start
    for _ in range(n):
        if ray_of[cur] == last_ray:
            return chain
        nxt = (cur + step) % n
        if ray_of[nxt] == ray_of[cur]:
            raise UnsupportedSceneError("polygon edge collinear with the apex")
        chain.append(nxt)
        cur = nxt
    raise UnsupportedSceneError("boundary chain did not terminate")


def section_edges(
    poly: ConvexPolygon, apex: Point, order: AngularOrder
) -> Tuple[Tuple[int, ...], Tuple[int, ...]]:
    """Near and far polygon edge index for every section.

    The near chain (edges crossed first by rays from the apex) is the
    polygon boundary walked clockwise from the nearest vertex on the
    minimum ray; the far chain is walked counter-clockwise from the
    farthest vertex on that ray. An edge may serve several consecutive
    sections when no chain vertex falls on an interior ray.
    """
    sorted_angles, _ = order
    m_rays = len(sorted_angles)
    if m_rays < 2:
        raise InvalidInputError("polygon subtends a single ray from the apex")
    ray_of = _ray_groups(poly, apex, sorted_angles)

    def dist2(i: int) -> float:
        vx, vy = poly.vertices[i]
        return (vx - apex[0]) ** 2 + (vy - apex[1]) ** 2

    first_group = [i for i in range(len(poly)) if ray_of[i] == 0]
    near_start = min(first_group, key=dist2)
    far_start = max(first_group, key=dist2)

    near_chain = _walk_chain(poly, ray_of, near_start, m_rays - 1, -1)
    far_chain = _walk_chain(poly, ray_of, far_start, m_rays - 1, +1)

    def per_section(chain: List[int], clockwise: bool) -> List[int]:
        edges = []
        pos = 0
        for j in range(m_rays - 1):
            while pos + 1 < len(chain) - 0 and ray_of[chain[pos + 1]] <= j:
                pos += 1
            a, b = chain[pos], chain[pos + 1]
            # polygon edge k runs from vertex k to vertex k+1
            edges.append(b if clockwise else a)
        return edges

    near_edges = per_section(near_chain, clockwise=True)
    far_edges = per_section(far_chain, clockwise=False)
    return tuple(near_edges), tuple(far_edges)


@dataclass(frozen=True)
class SectionPartition:
    """Angular sections of a polygon from an outside apex."""

    sorted_angles: Tuple[float, ...]
    vertex_order: Tuple[int, ...]
    near_edges: Tuple[int, ...]
    far_edges: Tuple[int, ...]
    section_areas: Tuple[float, ...]
    apex: Point

    @property
    def num_sections(self) -> int:
        return len(self.near_edges)

    def span(self) -> Tuple[float, float]:
        return self.sorted_angles[0], self.sorted_angles[-1]

    def locate(self, gamma: float) -> Optional[int]:
        """Section index whose closed angular range holds gamma, else None."""
        if gamma < self.sorted_angles[0] - _ANGLE_MERGE:
            return None
        if gamma > self.sorted_angles[-1] + _ANGLE_MERGE:
            return None
        j = bisect_right(self.sorted_angles, gamma) - 1
        return min(max(j, 0), self.num_sections - 1)


def _ray_on_line(apex: Point, gamma: float, ln: Line) -> Point:
    ux, uy = math.cos(gamma), math.sin(gamma)
    denom = ux * ln.dy - uy * ln.dx
    if denom == 0.0:
        raise InvalidInputError("section ray parallel to its edge line")
    wx, wy = ln.px - apex[0], ln.py - apex[1]
    t = (wx * ln.dy - wy * ln.dx) / denom
    return (apex[0] + t * ux, apex[1] + t * uy)


def _section_area(
    poly: ConvexPolygon, apex: Point, a0: float, a1: float, near_edge: int, far_edge: int
) -> float:
    near_ln = poly.edge_line(near_edge)
    far_ln = poly.edge_line(far_edge)
    # counter-clockwise ring: out along the low ray, across the far edge,
    # back along the high ray, home along the near edge
    quad = (
        _ray_on_line(apex, a0, near_ln),
        _ray_on_line(apex, a0, far_ln),
        _ray_on_line(apex, a1, far_ln),
        _ray_on_line(apex, a1, near_ln),
    )
    return shoelace_area(quad)


def vertex_partition(poly: ConvexPolygon, apex: Point) -> SectionPartition:
    """Full partition: sorted rays, per-section edges and section areas."""
    order = angular_order(poly, apex)
    near_edges, far_edges = section_edges(poly, apex, order)
    areas = tuple(
        _section_area(
            poly,
            apex,
            order.sorted_angles[j],
            order.sorted_angles[j + 1],
            near_edges[j],
            far_edges[j],
        )
        for j in range(len(near_edges))
    )
    return SectionPartition(
        sorted_angles=order.sorted_angles,
        vertex_order=order.vertex_order,
        near_edges=near_edges,
        far_edges=far_edges,
        section_areas=areas,
        apex=(float(apex[0]), float(apex[1])),
    )


def breakpoints(
    sorted_angles: Sequence[float],
    phi: float,
    domain: Optional[Tuple[float, float]] = None,
) -> List[float]:
    """Sorted direction breakpoints: vertex rays merged with rays - phi.

    Clamped to the admissible direction domain, by default
    [first_ray - phi, last_ray] (every direction with a nonempty
    intersection). Domain endpoints are included so consecutive pairs tile
    the domain. Returns an empty list for an empty domain.
    """
    if not (0.0 < phi < math.pi):
        raise InvalidInputError("opening must lie in (0, pi)")
    lo = sorted_angles[0] - phi
    hi = sorted_angles[-1]
    if domain is not None:
        lo = max(lo, float(domain[0]))
        hi = min(hi, float(domain[1]))
        if hi - lo <= _ANGLE_MERGE:
            return []
    cands = [lo, hi]
    for a in sorted_angles:
        for v in (a, a - phi):
            if lo - _ANGLE_MERGE < v < hi + _ANGLE_MERGE:
                cands.append(min(max(v, lo), hi))
    cands.sort()
    out: List[float] = []
    for v in cands:
        if out and v - out[-1] <= _ANGLE_MERGE:
            continue
        out.append(v)
    return out


@dataclass(frozen=True)
class RotationCell:
    """One maximal direction interval with fixed combinatorial structure.

    right_section / left_section give the section holding the right/left
    boundary ray for interior directions (None when that ray is outside
    the polygon's angular span, so the boundary is not moving). Equal
    indices mean the whole intersection lives in one section. middle_area
    is the constant area of fully covered sections. The cell carries its
    scene (polygon, apex, opening) so it can be solved standalone.
    """

    interval: Tuple[float, float]
    right_section: Optional[int]
    left_section: Optional[int]
    middle_area: float
    right_wedge: Optional[StaticWedge]
    left_wedge: Optional[StaticWedge]
    right_section_end: Optional[float]
    left_section_start: Optional[float]
    poly: ConvexPolygon
    apex: Point
    opening: float
    empty: bool = False


def section_wedge(poly: ConvexPolygon, part: SectionPartition, j: int) -> StaticWedge:
    """StaticWedge backed by section j's near and far edge lines."""
    return wedge_from_lines(
        part.apex,
        poly.edge_line(part.far_edges[j]),
        poly.edge_line(part.near_edges[j]),
    )


def cell_descriptor(
    poly: ConvexPolygon,
    apex: Point,
    part: SectionPartition,
    phi: float,
    interval: Tuple[float, float],
) -> RotationCell:
    """Classify one breakpoint interval by probing its midpoint.

    Inside a cell the structure is constant, so one interior probe settles
    which sections hold the boundary rays and which are fully covered; the
    covered ones contribute a constant middle area.
    """
    lo, hi = float(interval[0]), float(interval[1])
    if not hi > lo:
        raise InvalidInputError("cell interval must have positive width")
    probe = 0.5 * (lo + hi)
    right_sec = part.locate(probe)
    left_sec = part.locate(probe + phi)

    first, last = part.span()
    if right_sec is None and left_sec is None:
        straddles = probe < first and probe + phi > last
        if not straddles:
            return RotationCell(
                interval=(lo, hi),
                right_section=None,
                left_section=None,
                middle_area=0.0,
                right_wedge=None,
                left_wedge=None,
                right_section_end=None,
                left_section_start=None,
                poly=poly,
                apex=apex,
                opening=phi,
                empty=True,
            )

    m_start = 0 if right_sec is None else right_sec + 1
    m_end = part.num_sections - 1 if left_sec is None else left_sec - 1
    if right_sec is not None and right_sec == left_sec:
        middle = 0.0
    else:
        middle = sum(part.section_areas[j] for j in range(m_start, m_end + 1))

    right_wedge = left_wedge = None
    if right_sec is not None:
        right_wedge = section_wedge(poly, part, right_sec)
    if left_sec is not None:
        if left_sec == right_sec:
            left_wedge = right_wedge
        else:
            left_wedge = section_wedge(poly, part, left_sec)

    return RotationCell(
        interval=(lo, hi),
        right_section=right_sec,
        left_section=left_sec,
        middle_area=middle,
        right_wedge=right_wedge,
        left_wedge=left_wedge,
        right_section_end=None if right_sec is None else part.sorted_angles[right_sec + 1],
        left_section_start=None if left_sec is None else part.sorted_angles[left_sec],
        poly=poly,
        apex=apex,
        opening=phi,
    )


def build_cells(
    poly: ConvexPolygon,
    apex: Point,
    part: SectionPartition,
    phi: float,
    bps: Sequence[float],
) -> List[RotationCell]:
    """Cells for every positive-width consecutive breakpoint pair."""
    cells = []
    for i in range(len(bps) - 1):
        if bps[i + 1] - bps[i] > _ANGLE_MERGE:
            cells.append(cell_descriptor(poly, apex, part, phi, (bps[i], bps[i + 1])))
    return cells

"""Planar/3-D primitives for the hot-spot, base-station and tether geometry.

All lengths are meters, all angles radians, measured counterclockwise from
east (+x).  Heights are the third coordinate, so "projection" drops h.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

TWO_PI = 2.0 * math.pi

# Absolute window (meters / dimensionless) used to resolve tangency,
# concentricity and slightly-out-of-range arccos arguments.
GEOM_TOL = 1e-9


class GeometryError(ValueError):
    """Base class for degenerate or impossible geometric configurations."""


class DisjointCircles(GeometryError):
    """The circles are separated and share no point."""


class ContainedCircles(GeometryError):
    """One circle lies strictly inside the other (or they are concentric)."""


class DegenerateGeometry(GeometryError):
    """Coincident points or another configuration with no defined answer."""


@dataclass(frozen=True)
class Point2:
    x: float
    y: float


@dataclass(frozen=True)
class Point3:
    x: float
    y: float
    h: float  # height above ground [m]


@dataclass(frozen=True)
class Circle:
    center: Point2
    radius: float

    def __post_init__(self):
        if not self.radius > 0.0:
            raise ValueError(f"circle radius must be positive, got {self.radius}")


def project(p: Point3) -> Point2:
    """Ground projection (drop the height coordinate)."""
    return Point2(p.x, p.y)


def distance2(a: Point2, b: Point2) -> float:
    return math.hypot(a.x - b.x, a.y - b.y)


def distance3(a: Point3, b: Point3) -> float:
    return math.sqrt((a.x - b.x) ** 2 + (a.y - b.y) ** 2 + (a.h - b.h) ** 2)


def wrap_angle(theta: float) -> float:
    """Wrap to [0, 2*pi)."""
    w = theta % TWO_PI
    # theta % 2pi can round up to exactly 2pi for tiny negative inputs
    return 0.0 if w >= TWO_PI else w


def wrap_signed(theta: float) -> float:
    """Wrap to [-pi, pi)."""
    return wrap_angle(theta + math.pi) - math.pi


def angle_from_east(at: Point2, to: Point2) -> float:
    """Direction of the ray at -> to, in [0, 2*pi). Raises if the points coincide."""
    dx, dy = to.x - at.x, to.y - at.y
    if dx == 0.0 and dy == 0.0:
        raise DegenerateGeometry(f"cannot take the direction between coincident points {at}")
    return wrap_angle(math.atan2(dy, dx))


def angle_in_interval(theta: float, start: float, sweep: float) -> bool:
    """True if theta lies on the counterclockwise arc start -> start + sweep."""
    if sweep < 0.0:
        raise ValueError("sweep must be non-negative")
    return (theta - start) % TWO_PI <= sweep + GEOM_TOL


def _clamped_acos(arg: float) -> float:
    """arccos with the tolerance policy: clamp small excursions, reject big ones."""
    if arg > 1.0 or arg < -1.0:
        if abs(arg) - 1.0 > 1e-9:
            raise GeometryError(f"arccos argument {arg} out of range beyond tolerance")
        arg = 1.0 if arg > 1.0 else -1.0
    return math.acos(arg)


def circle_intersection(c1: Circle, c2: Circle) -> tuple[Point2, ...]:
    """Intersection points of two circles.

    Returns two points (the one on the counterclockwise side of the directed
    line c1.center -> c2.center first) or a single point when tangent within
    tolerance.  Raises DisjointCircles / ContainedCircles when they do not
    meet.
    """
    d = distance2(c1.center, c2.center)
    r1, r2 = c1.radius, c2.radius
    if d <= GEOM_TOL:
        raise ContainedCircles(f"concentric circles (d={d}) have no discrete intersection")
    if d > r1 + r2 + GEOM_TOL:
        raise DisjointCircles(f"circles separated by gap {d - (r1 + r2)}")
    if d < abs(r1 - r2) - GEOM_TOL:
        raise ContainedCircles(f"one circle inside the other by margin {abs(r1 - r2) - d}")

    a = (d * d + r1 * r1 - r2 * r2) / (2.0 * d)
    h2 = r1 * r1 - a * a
    ux, uy = (c2.center.x - c1.center.x) / d, (c2.center.y - c1.center.y) / d
    bx, by = c1.center.x + a * ux, c1.center.y + a * uy
    if h2 <= GEOM_TOL * GEOM_TOL or d >= r1 + r2 - GEOM_TOL or d <= abs(r1 - r2) + GEOM_TOL:
        return (Point2(bx, by),)
    h = math.sqrt(h2)
    # (-uy, ux) is the left normal of the direction c1 -> c2.
    return (Point2(bx - h * uy, by + h * ux), Point2(bx + h * uy, by - h * ux))


@dataclass(frozen=True)
class ArcInDisk:
    """The portion of a circle that lies inside a disk.

    ``endpoints`` is None when the arc is the full circle or empty; otherwise
    it holds the two boundary points, counterclockwise side of the directed
    line disk-center -> circle-center first.
    """

    arc_circle: Circle
    clip_disk: Circle
    length: float
    endpoints: tuple[Point2, Point2] | None

    @property
    def half_angle(self) -> float:
        """Angular half-width of the arc as seen from the circle center."""
        return 0.5 * self.length / self.arc_circle.radius


def arc_length_inside(arc_of: Circle, inside: Circle) -> ArcInDisk:
    """Clip the circle ``arc_of`` against the closed disk bounded by ``inside``."""
    d = distance2(arc_of.center, inside.center)
    ra, rd = arc_of.radius, inside.radius
    if d + ra <= rd + GEOM_TOL:  # circle entirely within the disk
        return ArcInDisk(arc_of, inside, TWO_PI * ra, None)
    if d >= ra + rd - GEOM_TOL or d + rd <= ra + GEOM_TOL:  # no overlap at all
        return ArcInDisk(arc_of, inside, 0.0, None)
    half = _clamped_acos((d * d + ra * ra - rd * rd) / (2.0 * d * ra))
    pts = circle_intersection(inside, arc_of)
    if len(pts) == 1:
        pts = (pts[0], pts[0])
    return ArcInDisk(arc_of, inside, 2.0 * ra * half, pts)


@dataclass(frozen=True)
class SphericalCone:
    """Reachable set of a tethered vehicle anchored at ``apex``.

    The set is the ball of radius ``tether_len`` around the apex, cut to the
    cone of half-angle ``min_inclination`` about the vertical through the
    apex (so the lateral boundary sits at elevation 90 deg minus that angle).
    """

    apex: Point3
    tether_len: float  # T [m]
    min_inclination: float  # phi [rad], 0 <= phi < pi/2

    def __post_init__(self):
        if not self.tether_len > 0.0:
            raise ValueError("tether length must be positive")
        if not 0.0 <= self.min_inclination < 0.5 * math.pi:
            raise ValueError("min inclination must lie in [0, pi/2)")

    @property
    def h_top(self) -> float:
        return self.apex.h + self.tether_len


def cone_radius_at_height(cone: SphericalCone, h_u: float) -> float:
    """Max horizontal offset from the apex available at hover height ``h_u``.

    Linear (conical) below the cone/sphere junction apex.h + T*cos(phi),
    spherical cap above it.
    """
    dh = h_u - cone.apex.h
    if dh < -GEOM_TOL or dh > cone.tether_len + GEOM_TOL:
        raise ValueError(f"height {h_u} outside the reachable band "
                         f"[{cone.apex.h}, {cone.h_top}]")
    dh = min(max(dh, 0.0), cone.tether_len)
    junction = cone.tether_len * math.cos(cone.min_inclination)
    if dh < junction:
        return dh * math.tan(cone.min_inclination)
    return math.sqrt(max(0.0, cone.tether_len ** 2 - dh * dh))


def cone_contains(cone: SphericalCone, p: Point3) -> bool:
    """Membership test; agrees with cone_radius_at_height on the boundary."""
    dh = p.h - cone.apex.h
    if dh < 0.0:
        return False
    dist = distance3(cone.apex, p)
    if dist > cone.tether_len * (1.0 + 1e-12) + GEOM_TOL:
        return False
    horiz = math.hypot(p.x - cone.apex.x, p.y - cone.apex.y)
    return math.atan2(horiz, dh) <= cone.min_inclination + 1e-12


@dataclass(frozen=True)
class CroppedCone:
    """A spherical cone restricted to the closed half-plane y >= 0.

    The apex must satisfy y >= 0 (mirror the scenario first if it does not).
    """

    cone: SphericalCone

    def __post_init__(self):
        if self.cone.apex.y < -GEOM_TOL:
            raise ValueError("cropped cone requires an apex with y >= 0; mirror first")


def cropped_radius(cropped: CroppedCone, h_u: float, psi: float) -> float:
    """Reach along direction ``psi`` at height ``h_u`` before leaving y >= 0.

    For psi in [0, pi] the half-plane never cuts the ray; below the axis the
    ray exits at range -y_apex / sin(psi).
    """
    r_cone = cone_radius_at_height(cropped.cone, h_u)
    s = math.sin(wrap_angle(psi))
    if s >= 0.0:
        return r_cone
    return min(r_cone, -max(cropped.cone.apex.y, 0.0) / s)

"""Distance distributions of a uniform user in a circular hot-spot.

Two laws drive every coverage integral:

* the marginal pdf of the distance R between a uniform point of the disk and
  a fixed ground anchor (triangular inside the disk, an arccos overlap factor
  once circles of radius R start leaving the disk), and

* conditioned on the distance r_b to one anchor, the law of the distance r_u
  to a second anchor.  Conditioned on r_b the user is uniform in *angle* on
  the part of the circle C(anchor_b, r_b) inside the disk; mapping angle to
  distance gives a density N * r_u / (2 phi_o d_bu r_b sin(phi_u)) where the
  multiplicity N in {0, 1, 2} counts circle points at that distance inside
  the clipped arc.  N switches at the distances d1 <= d2 from the second
  anchor's projection to the two arc endpoints.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .geometry import (
    ArcInDisk,
    Circle,
    DegenerateGeometry,
    Point2,
    arc_length_inside,
    angle_from_east,
    distance2,
    wrap_signed,
)
from .quadrature import Panel, integrate_adaptive

_EPS = 1e-12


@dataclass(frozen=True)
class HotSpot:
    center: Point2
    radius: float

    def __post_init__(self):
        if not self.radius > 0.0:
            raise ValueError("hot-spot radius must be positive")


@dataclass(frozen=True)
class Segment:
    """Density piece on [lo, hi]; singular flags mark square-root endpoints."""

    lo: float
    hi: float
    fn: Callable[[np.ndarray], np.ndarray]
    singular_lo: bool = False
    singular_hi: bool = False


@dataclass(frozen=True)
class Atom:
    x: float
    weight: float


@dataclass(frozen=True)
class Breakpoint:
    r: float
    singular: bool


@dataclass(frozen=True)
class PiecewisePdf:
    """Piecewise density plus optional point masses.

    Calling the object evaluates the absolutely continuous part (atoms carry
    their own weights).  On shared segment endpoints the later segment wins,
    matching the overlap-branch convention of the marginal law.
    """

    segments: tuple[Segment, ...]
    atoms: tuple[Atom, ...] = ()

    def support(self) -> tuple[float, float]:
        xs = [s.lo for s in self.segments] + [s.hi for s in self.segments]
        xs += [a.x for a in self.atoms]
        return (min(xs), max(xs)) if xs else (0.0, 0.0)

    def __call__(self, r):
        scalar = np.isscalar(r) or np.ndim(r) == 0
        r = np.atleast_1d(np.asarray(r, dtype=float))
        out = np.zeros_like(r)
        for seg in self.segments:
            mask = (r >= seg.lo) & (r <= seg.hi)
            if np.any(mask):
                out[mask] = seg.fn(r[mask])
        return float(out[0]) if scalar else out

    def panels(self) -> list[Panel]:
        return [Panel(s.lo, s.hi, s.singular_lo, s.singular_hi) for s in self.segments]

    def normalization(self, abs_tol: float = 1e-9) -> float:
        total = sum(a.weight for a in self.atoms)
        if self.segments:
            val, _ = integrate_adaptive(self, self.panels(), abs_tol=abs_tol)
            total += val
        return total


def pdf_breakpoints(pdf: PiecewisePdf) -> tuple[Breakpoint, ...]:
    """Ordered segment endpoints, flagged where the density (or its slope)
    blows up like an inverse square root."""
    flagged: dict[float, bool] = {}
    for seg in pdf.segments:
        flagged[seg.lo] = flagged.get(seg.lo, False) or seg.singular_lo
        flagged[seg.hi] = flagged.get(seg.hi, False) or seg.singular_hi
    return tuple(Breakpoint(r, flagged[r]) for r in sorted(flagged))


# ---------------------------------------------------------------------------
# Marginal law
# ---------------------------------------------------------------------------

def marginal_distance_pdf(hotspot: HotSpot, anchor: Point2) -> PiecewisePdf:
    """pdf of the distance from a uniform hot-spot user to ``anchor``."""
    big_r = hotspot.radius
    d = distance2(anchor, hotspot.center)
    norm = 2.0 / (big_r * big_r)

    def triangular(r):
        return norm * np.asarray(r, dtype=float)

    if d <= _EPS:
        return PiecewisePdf((Segment(0.0, big_r, triangular),))

    def overlap(r):
        r = np.asarray(r, dtype=float)
        arg = np.clip((d * d + r * r - big_r * big_r) / (2.0 * d * r), -1.0, 1.0)
        return (norm / math.pi) * r * np.arccos(arg)

    lo = abs(big_r - d)
    segs = []
    if d < big_r:
        segs.append(Segment(0.0, lo, triangular))
    segs.append(Segment(lo, big_r + d, overlap,
                        singular_lo=(abs(d - big_r) > _EPS), singular_hi=True))
    return PiecewisePdf(tuple(segs))


def marginal_distance_cdf(hotspot: HotSpot, anchor: Point2, r):
    """P(distance <= r): the disk-overlap (lens) area over the hot-spot area."""
    big_r = hotspot.radius
    d = distance2(anchor, hotspot.center)
    scalar = np.isscalar(r) or np.ndim(r) == 0
    r = np.atleast_1d(np.asarray(r, dtype=float))
    out = np.zeros_like(r)
    out[r >= d + big_r] = 1.0
    if d <= _EPS:
        inside = (r >= 0.0) & (r < big_r)
        out[inside] = (r[inside] / big_r) ** 2
        return float(out[0]) if scalar else out
    contained = (r + d <= big_r) & (r >= 0.0)
    out[contained] = (r[contained] / big_r) ** 2
    lens = (r > max(0.0, d - big_r)) & (r + d > big_r) & (r < d + big_r)
    if np.any(lens):
        rl = r[lens]
        a1 = np.arccos(np.clip((d * d + big_r * big_r - rl * rl)
                               / (2.0 * d * big_r), -1.0, 1.0))
        a2 = np.arccos(np.clip((d * d + rl * rl - big_r * big_r)
                               / (2.0 * d * rl), -1.0, 1.0))
        s = np.maximum((rl + big_r - d) * (d + rl - big_r)
                       * (d + big_r - rl) * (d + big_r + rl), 0.0)
        area = big_r * big_r * a1 + rl * rl * a2 - 0.5 * np.sqrt(s)
        out[lens] = area / (math.pi * big_r * big_r)
    return float(out[0]) if scalar else out


def marginal_support(hotspot: HotSpot, anchor: Point2) -> tuple[float, float]:
    d = distance2(anchor, hotspot.center)
    return (max(0.0, d - hotspot.radius), d + hotspot.radius)


# ---------------------------------------------------------------------------
# Conditional law
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ConditionalGeometry:
    """Everything the conditional distance law needs, precomputed.

    ``arc`` clips the circle of radius r_b around the first anchor against
    the hot-spot; ``theta_uav`` is the direction from the first anchor's
    projection to the second's (None when they coincide).
    """

    hotspot: HotSpot
    tbs_proj: Point2
    uav_proj: Point2
    r_b: float
    d_bo: float
    d_bu: float
    arc: ArcInDisk
    theta_uav: float | None

    @property
    def full_circle(self) -> bool:
        return self.arc.endpoints is None

    @property
    def phi_o(self) -> float:
        """Angular half-width of the in-disk arc."""
        return self.arc.half_angle

    def uav_offset(self) -> float:
        """Signed angle from the arc center-direction to the second anchor."""
        if self.theta_uav is None:
            raise DegenerateGeometry("anchors coincide; no direction defined")
        tau = angle_from_east(self.tbs_proj, self.hotspot.center)
        return wrap_signed(self.theta_uav - tau)


def conditional_geometry(hotspot: HotSpot, tbs_proj: Point2, uav_proj: Point2,
                         r_b: float) -> ConditionalGeometry:
    """Clip the distance-r_b circle against the hot-spot and locate the UAV.

    ``r_b`` must lie inside the support of the marginal law (and be positive:
    at r_b = 0 the circle collapses and the conditional law is just an atom
    at the anchors' ground separation).
    """
    d_bo = distance2(tbs_proj, hotspot.center)
    lo, hi = max(0.0, d_bo - hotspot.radius), d_bo + hotspot.radius
    if not lo <= r_b <= hi:
        raise ValueError(f"r_b={r_b} outside the marginal support [{lo}, {hi}]")
    if r_b <= 0.0:
        raise DegenerateGeometry("r_b = 0 collapses the circle to a point")
    arc = arc_length_inside(Circle(tbs_proj, r_b), Circle(hotspot.center, hotspot.radius))
    if arc.length <= 0.0:
        raise ValueError(f"circle at r_b={r_b} only touches the hot-spot boundary")
    d_bu = distance2(tbs_proj, uav_proj)
    theta = angle_from_east(tbs_proj, uav_proj) if d_bu > _EPS else None
    return ConditionalGeometry(hotspot, tbs_proj, uav_proj, r_b, d_bo, d_bu, arc, theta)


def _chord(d_bu: float, r_b: float, a) -> np.ndarray:
    """Distance from the second anchor to the circle point at angle offset a."""
    s = np.sin(0.5 * np.asarray(a, dtype=float))
    return np.sqrt((d_bu - r_b) ** 2 + 4.0 * d_bu * r_b * s * s)


def _chord_angle(d_bu: float, r_b: float, r_u) -> np.ndarray:
    """Inverse of _chord: offset angle at which the chord reaches r_u."""
    vmin, vmax = abs(d_bu - r_b), d_bu + r_b
    r_u = np.atleast_1d(np.asarray(r_u, dtype=float))
    num = np.clip((r_u - vmin) * (r_u + vmin), 0.0, None)
    arg = np.sqrt(num / (4.0 * d_bu * r_b))
    out = 2.0 * np.arcsin(np.clip(arg, 0.0, 1.0))
    out[r_u >= vmax] = math.pi
    return out


def conditional_segment_bounds(geom: ConditionalGeometry) -> tuple[tuple[float, float, float], ...]:
    """(lo, hi, multiplicity) pieces of the conditional law, in order.

    The multiplicity is the number of in-arc circle points at each distance:
    2 below the nearer endpoint-distance d1 when the direction to the second
    anchor lies inside the arc (0 otherwise), 1 between d1 and d2, and 2
    above d2 when the opposite direction lies inside the arc (0 otherwise).
    """
    r_b, d_bu = geom.r_b, geom.d_bu
    if d_bu <= _EPS:
        return ()
    vmin, vmax = abs(d_bu - r_b), d_bu + r_b
    if geom.full_circle:
        return ((vmin, vmax, 2.0),)
    phi_o = geom.phi_o
    chi = geom.uav_offset()
    a_near = abs(wrap_signed(phi_o - chi))
    a_far = abs(wrap_signed(phi_o + chi))
    a_lo, a_hi = min(a_near, a_far), max(a_near, a_far)
    d1 = float(_chord(d_bu, r_b, a_lo))
    d2 = float(_chord(d_bu, r_b, a_hi))
    n_low = 2.0 if abs(chi) <= phi_o else 0.0
    n_high = 2.0 if math.pi - abs(chi) <= phi_o else 0.0
    out = []
    if d1 - vmin > _EPS:
        out.append((vmin, d1, n_low))
    if d2 - d1 > _EPS:
        out.append((d1, d2, 1.0))
    if vmax - d2 > _EPS:
        out.append((d2, vmax, n_high))
    return tuple(out)


def conditional_distance_pdf(geom: ConditionalGeometry) -> PiecewisePdf:
    """Conditional pdf of the distance to the second anchor given r_b."""
    r_b, d_bu = geom.r_b, geom.d_bu
    if d_bu <= _EPS:
        # Every point of the circle is at distance exactly r_b.
        return PiecewisePdf((), atoms=(Atom(r_b, 1.0),))

    vmin, vmax = abs(d_bu - r_b), d_bu + r_b
    phi_o = geom.phi_o

    def density_with(n: float):
        scale = n / (2.0 * phi_o * d_bu * r_b)

        def fn(r_u):
            r_u = np.asarray(r_u, dtype=float)
            c = np.clip((d_bu * d_bu + r_b * r_b - r_u * r_u)
                        / (2.0 * d_bu * r_b), -1.0, 1.0)
            sin_phi = np.sqrt(np.maximum(1.0 - c * c, 0.0))
            out = np.zeros_like(r_u)
            ok = sin_phi > 0.0
            out[ok] = scale * r_u[ok] / sin_phi[ok]
            return out

        return fn

    segs = tuple(
        Segment(lo, hi, density_with(n),
                singular_lo=(lo == vmin), singular_hi=(hi == vmax))
        for (lo, hi, n) in conditional_segment_bounds(geom)
    )
    return PiecewisePdf(segs)


def conditional_distance_cdf(geom: ConditionalGeometry, r_u):
    """Exact conditional CDF via the angular overlap of two circular arcs.

    The set {distance <= r_u} corresponds to circle offsets |a| <= a*(r_u)
    from the direction to the second anchor; intersecting that interval with
    the in-disk arc (half-width phi_o centered at offset -chi) and dividing
    by the arc measure gives the CDF, with no quadrature involved.
    """
    r_b, d_bu = geom.r_b, geom.d_bu
    scalar = np.isscalar(r_u) or np.ndim(r_u) == 0
    r_u = np.atleast_1d(np.asarray(r_u, dtype=float))
    if d_bu <= _EPS:
        out = (r_u >= r_b).astype(float)
        return float(out[0]) if scalar else out
    a_star = _chord_angle(d_bu, r_b, r_u)
    phi_o = geom.phi_o
    chi = 0.0 if geom.full_circle else geom.uav_offset()
    overlap = np.zeros_like(a_star)
    for k in (-1.0, 0.0, 1.0):
        lo = np.maximum(-a_star, -chi - phi_o + 2.0 * math.pi * k)
        hi = np.minimum(a_star, -chi + phi_o + 2.0 * math.pi * k)
        overlap += np.maximum(hi - lo, 0.0)
    out = overlap / (2.0 * phi_o)
    return float(out[0]) if scalar else out

"""Coverage probabilities of the TBS / T-UAV / U-UAV system.

The tethered system value is a nested expectation over the hot-spot user:
outer over the user's distance r_b to the TBS projection (marginal law),
inner over its distance r_u to the UAV projection (conditional law), with
the serving node picked by the smaller biased ground distance — the UAV wins
below the boundary lambda_i(r_b) = ((rho_u/rho_b) r_b^alpha_b / eta_i)^(1/alpha_u)
for its current LoS state i.  The untethered value mixes the same integral
(scaled by the backhaul success probability) with the TBS-only fallback at
weight 1 - duty_cycle.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Mapping

import numpy as np

from ._core import backend as _backend
from .channel import (
    EnvironmentParams,
    LinkParams,
    SnrThreshold,
    elevation_sigmoid,
    los_probability_backhaul,
    nakagami_gain_ccdf,
    rayleigh_gain_ccdf,
    DEG,
)
from .distributions import HotSpot, marginal_distance_pdf
from .geometry import Point2, Point3, angle_from_east, distance2, project, wrap_signed
from .quadrature import Panel, integrate_adaptive

_EPS = 1e-12

# Default absolute tolerances (single / nested integrals).
LINK_TOL = 1e-6
SYSTEM_TOL = 1e-5
MAX_EVALS = 100_000


@dataclass(frozen=True)
class Scenario:
    """Static deployment: hot-spot, TBS, environment, link budget, threshold."""

    hotspot: HotSpot
    tbs: Point3
    env: EnvironmentParams
    link: LinkParams
    threshold: SnrThreshold

    def __post_init__(self):
        if abs(self.tbs.y) > 1e-9 or abs(self.hotspot.center.y) > 1e-9:
            raise ValueError("by convention the hot-spot center and the TBS sit on "
                             "the x-axis (y = 0); rotate the scenario first")
        if self.tbs.h <= 0.0:
            raise ValueError("TBS height must be positive")

    @property
    def d_bo(self) -> float:
        """Ground distance TBS -> hot-spot center."""
        return distance2(project(self.tbs), self.hotspot.center)


@dataclass(frozen=True)
class Tethered:
    """Access-only UAV relay; the wired backhaul never fails."""


@dataclass(frozen=True)
class Untethered:
    duty_cycle: float = 1.0  # availability A in [0, 1]

    def __post_init__(self):
        if not 0.0 <= self.duty_cycle <= 1.0:
            raise ValueError("duty cycle must lie in [0, 1]")


UavMode = Tethered | Untethered


@dataclass(frozen=True)
class CoverageResult:
    value: float
    quad_error: float
    breakdown: Mapping[str, float]


class Association(enum.Enum):
    UAV_ALWAYS = "uav_always"
    UAV_IF_LOS = "uav_if_los"
    TBS_ALWAYS = "tbs_always"


# ---------------------------------------------------------------------------
# Pointwise kernels
# ---------------------------------------------------------------------------

def kernel_tbs(threshold: SnrThreshold, link: LinkParams, r_b, h_b: float):
    """P(TBS SNR > beta) at ground distance r_b from a TBS of height h_b."""
    d_a = (np.asarray(r_b, dtype=float) ** 2 + h_b * h_b) ** (0.5 * link.alpha_b)
    return rayleigh_gain_ccdf(threshold.beta_bar_b * d_a, link.mu)


def kernel_uav(threshold: SnrThreshold, link: LinkParams, r_u, h_u: float, los: bool):
    """P(UAV SNR > beta) at ground distance r_u for a fixed LoS state."""
    eta = link.eta_los if los else link.eta_nlos
    d_a = (np.asarray(r_u, dtype=float) ** 2 + h_u * h_u) ** (0.5 * link.alpha_u)
    return nakagami_gain_ccdf(threshold.beta_bar_u * eta * d_a, link.m)


# ---------------------------------------------------------------------------
# Link coverages (single integrals / closed forms)
# ---------------------------------------------------------------------------

@lru_cache(maxsize=256)
def _coverage_tbs_cached(scenario: Scenario, abs_tol: float, max_evals: int):
    val, err = _backend.link_coverage_tbs(
        scenario.hotspot.radius, scenario.d_bo, scenario.tbs.h,
        scenario.link.mu, scenario.threshold.beta_bar_b, scenario.link.alpha_b,
        abs_tol, max_evals)
    return val, err


def coverage_tbs(scenario: Scenario, abs_tol: float = LINK_TOL,
                 max_evals: int = MAX_EVALS) -> CoverageResult:
    """Hot-spot-averaged coverage of the terrestrial link alone."""
    val, err = _coverage_tbs_cached(scenario, abs_tol, max_evals)
    return CoverageResult(val, err, {"tbs": val})


def coverage_uav_access(scenario: Scenario, uav: Point3, abs_tol: float = LINK_TOL,
                        max_evals: int = MAX_EVALS) -> CoverageResult:
    """Hot-spot-averaged coverage of the UAV access link alone."""
    d_uo = distance2(project(uav), scenario.hotspot.center)
    link, thr, env = scenario.link, scenario.threshold, scenario.env
    val, err, los_part, nlos_part = _backend.link_coverage_uav(
        scenario.hotspot.radius, d_uo, uav.h, link.m, thr.beta_bar_u,
        link.alpha_u, link.eta_los, link.eta_nlos, env.a_r, env.b_r,
        abs_tol, max_evals)
    return CoverageResult(val, err, {"uav_los": los_part, "uav_nlos": nlos_part})


def coverage_backhaul(scenario: Scenario, uav: Point3) -> float:
    """Success probability of the TBS -> UAV backhaul (closed form)."""
    kappa = los_probability_backhaul(scenario.env, scenario.tbs, uav)
    horiz = distance2(project(scenario.tbs), project(uav))
    dh = uav.h - scenario.tbs.h
    k_los = float(kernel_uav(scenario.threshold, scenario.link, horiz, dh, los=True))
    k_nlos = float(kernel_uav(scenario.threshold, scenario.link, horiz, dh, los=False))
    return kappa * k_los + (1.0 - kappa) * k_nlos


def coverage_end_to_end(scenario: Scenario, uav: Point3, mode: UavMode,
                        abs_tol: float = LINK_TOL) -> float:
    """Access coverage for a tethered relay; access x backhaul for untethered."""
    access = coverage_uav_access(scenario, uav, abs_tol=abs_tol).value
    if isinstance(mode, Untethered):
        return access * coverage_backhaul(scenario, uav)
    return access


# ---------------------------------------------------------------------------
# Association
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AssociationBoundary:
    """Ground-distance thresholds below which the UAV wins the association."""

    power_ratio: float  # rho_u / rho_b
    alpha_b: float
    alpha_u: float
    eta_los: float
    eta_nlos: float

    def _lam(self, r_b, eta: float):
        r_b = np.asarray(r_b, dtype=float)
        return (self.power_ratio * r_b ** self.alpha_b / eta) ** (1.0 / self.alpha_u)

    def lambda_los(self, r_b):
        return self._lam(r_b, self.eta_los)

    def lambda_nlos(self, r_b):
        return self._lam(r_b, self.eta_nlos)


def association_boundary(scenario: Scenario) -> AssociationBoundary:
    link = scenario.link
    return AssociationBoundary(link.rho_u / link.rho_b, link.alpha_b,
                               link.alpha_u, link.eta_los, link.eta_nlos)


def classify_user(scenario: Scenario, uav: Point3, user: Point2) -> Association:
    """Which node would serve this user, resolved over the LoS states."""
    bnd = association_boundary(scenario)
    r_b = distance2(user, project(scenario.tbs))
    r_u = distance2(user, project(uav))
    if r_u <= bnd.lambda_nlos(r_b):
        return Association.UAV_ALWAYS
    if r_u <= bnd.lambda_los(r_b):
        return Association.UAV_IF_LOS
    return Association.TBS_ALWAYS


# ---------------------------------------------------------------------------
# System coverage (nested integrals)
# ---------------------------------------------------------------------------

def _system_geometry(scenario: Scenario, uav: Point3) -> tuple[float, float, float]:
    """(d_bo, d_bu, chi): ground distances and the signed angle at the TBS
    projection between the directions to the hot-spot center and the UAV."""
    tbs_p, uav_p = project(scenario.tbs), project(uav)
    center = scenario.hotspot.center
    d_bo = distance2(tbs_p, center)
    d_bu = distance2(tbs_p, uav_p)
    if d_bo <= _EPS or d_bu <= _EPS:
        return d_bo, d_bu, 0.0
    chi = wrap_signed(angle_from_east(tbs_p, uav_p) - angle_from_east(tbs_p, center))
    return d_bo, d_bu, chi


def _split_panels(panels: list[Panel], points: list[float]) -> list[Panel]:
    for x in sorted(points):
        out = []
        for p in panels:
            if p.lo < x < p.hi:
                out.append(Panel(p.lo, x, p.singular_lo, False))
                out.append(Panel(x, p.hi, False, p.singular_hi))
            else:
                out.append(p)
        panels = out
    return panels


def _system_components_atom(scenario: Scenario, uav: Point3, assoc_only: bool,
                            abs_tol: float, max_evals: int):
    """UAV projected onto the TBS projection: r_u == r_b, one 1-D integral."""
    link, thr, env = scenario.link, scenario.threshold, scenario.env
    bnd = association_boundary(scenario)
    marg = marginal_distance_pdf(scenario.hotspot, project(scenario.tbs))

    def f(r):
        r = np.asarray(r, dtype=float)
        kl = elevation_sigmoid(env.a_r, env.b_r,
                               DEG * np.arcsin(uav.h / np.sqrt(r * r + uav.h ** 2)))
        kn = 1.0 - kl
        on_uav_l = r <= bnd.lambda_los(r)
        on_uav_n = r <= bnd.lambda_nlos(r)
        if assoc_only:
            cov_l = cov_n = p_br = 1.0
        else:
            cov_l = kernel_uav(thr, link, r, uav.h, los=True)
            cov_n = kernel_uav(thr, link, r, uav.h, los=False)
            p_br = kernel_tbs(thr, link, r, scenario.tbs.h)
        fm = marg(r)
        return np.stack([
            fm * kl * np.where(on_uav_l, cov_l, 0.0),
            fm * kn * np.where(on_uav_n, cov_n, 0.0),
            fm * kl * np.where(on_uav_l, 0.0, p_br),
            fm * kn * np.where(on_uav_n, 0.0, p_br),
        ], axis=1)

    # The indicators flip where r = lambda_i(r); split the panels there so the
    # jumps sit on panel boundaries.
    crossings = []
    if abs(link.alpha_u - link.alpha_b) > _EPS:
        for eta in (link.eta_los, link.eta_nlos):
            c = (bnd.power_ratio / eta) ** (1.0 / (link.alpha_u - link.alpha_b))
            crossings.append(c)
    panels = _split_panels(marg.panels(), crossings)
    val, err = integrate_adaptive(f, panels, abs_tol=abs_tol, max_evals=max_evals)
    return float(val[0]), float(val[1]), float(val[2]), float(val[3]), err


def _system_components(scenario: Scenario, uav: Point3, assoc_only: bool,
                       abs_tol: float, max_evals: int):
    d_bo, d_bu, chi = _system_geometry(scenario, uav)
    if d_bu <= _EPS:
        return _system_components_atom(scenario, uav, assoc_only, abs_tol, max_evals)
    link, thr, env = scenario.link, scenario.threshold, scenario.env
    return _backend.system_coverage(
        scenario.hotspot.radius, d_bo, d_bu, chi, scenario.tbs.h, uav.h,
        link.mu, link.m, thr.beta_bar_b, thr.beta_bar_u, link.alpha_b,
        link.alpha_u, link.eta_los, link.eta_nlos, env.a_r, env.b_r,
        link.rho_u / link.rho_b, assoc_only, abs_tol, max_evals)


def system_coverage_tuav(scenario: Scenario, uav: Point3,
                         abs_tol: float = SYSTEM_TOL,
                         max_evals: int = MAX_EVALS) -> CoverageResult:
    """Coverage with a tethered UAV at ``uav`` assisting the TBS."""
    ul, un, tl, tn, err = _system_components(scenario, uav, False, abs_tol, max_evals)
    return CoverageResult(ul + un + tl + tn, err, {
        "uav_los": ul, "uav_nlos": un,
        "tbs_los_region": tl, "tbs_nlos_region": tn,
        "unavailable": 0.0,
    })


def system_coverage_uuav(scenario: Scenario, uav: Point3, duty_cycle: float,
                         abs_tol: float = SYSTEM_TOL,
                         max_evals: int = MAX_EVALS) -> CoverageResult:
    """Coverage with an untethered UAV available a fraction ``duty_cycle`` of time.

    While available, the UAV-served regions additionally need the wireless
    backhaul to succeed; while away, everyone falls back to the TBS.
    """
    if not 0.0 <= duty_cycle <= 1.0:
        raise ValueError("duty cycle must lie in [0, 1]")
    ul, un, tl, tn, err = _system_components(scenario, uav, False, abs_tol, max_evals)
    p_bu = coverage_backhaul(scenario, uav)
    tbs_only = coverage_tbs(scenario, abs_tol=min(abs_tol, LINK_TOL), max_evals=max_evals)
    a = duty_cycle
    breakdown = {
        "uav_los": a * p_bu * ul,
        "uav_nlos": a * p_bu * un,
        "tbs_los_region": a * tl,
        "tbs_nlos_region": a * tn,
        "unavailable": (1.0 - a) * tbs_only.value,
    }
    value = sum(breakdown.values())
    return CoverageResult(value, a * err + (1.0 - a) * tbs_only.quad_error, breakdown)


def association_probability(scenario: Scenario, uav: Point3, mode: UavMode,
                            abs_tol: float = SYSTEM_TOL,
                            max_evals: int = MAX_EVALS) -> float:
    """Probability that a random hot-spot user is served by the UAV.

    For an untethered UAV this is weighted by its availability.
    """
    ul, un, _, _, _ = _system_components(scenario, uav, True, abs_tol, max_evals)
    p = ul + un
    if isinstance(mode, Untethered):
        return mode.duty_cycle * p
    return p

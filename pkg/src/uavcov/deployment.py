"""Tether-aware placement of the aerial base station.

For a tethered vehicle the reachable set is a spherical cone over the ground
station's rooftop, and the coverage-optimal position always sits on a
two-parameter slice of its boundary: the cropped lateral surface swept from
the direction facing the terrestrial station around to the direction facing
the hot-spot center.  This module builds that surface, searches it (grid and
simulated annealing), searches the free-placement problem for the untethered
vehicle, and runs rooftop ensembles with random station availability.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .channel import sample_building_height
from .coverage import (
    SYSTEM_TOL,
    Scenario,
    coverage_tbs,
    system_coverage_tuav,
    system_coverage_uuav,
)
from .geometry import (
    CroppedCone,
    GeometryError,
    Point3,
    SphericalCone,
    angle_from_east,
    cropped_radius,
    distance3,
    project,
    wrap_angle,
)

__all__ = [
    "AnnealParams",
    "EnsembleResult",
    "GroundStation",
    "OptimalSurface",
    "SearchResult",
    "TetherConfig",
    "anneal_tuav",
    "best_gs_selection",
    "grid_search_tuav",
    "grid_search_uuav",
    "mirror_canonicalize",
    "optimal_surface",
    "random_gs_ensemble",
    "unmirror_point",
]


@dataclass(frozen=True)
class GroundStation:
    """A rooftop the tethered vehicle can anchor to."""

    rooftop: Point3
    accessible: bool = True


@dataclass(frozen=True)
class TetherConfig:
    tether_len: float  # T [m]
    min_inclination: float  # phi [rad] measured from vertical at the anchor

    def cone(self, gs: GroundStation) -> SphericalCone:
        return SphericalCone(gs.rooftop, self.tether_len, self.min_inclination)


def mirror_canonicalize(gs: GroundStation) -> tuple[GroundStation, bool]:
    """Reflect a station with y < 0 across the x-axis.

    The whole model is symmetric about the line through the hot-spot center
    and the terrestrial station, so a below-axis rooftop can be searched in
    the upper half-plane and the answer reflected back with unmirror_point.
    """
    if gs.rooftop.y >= 0.0:
        return gs, False
    flipped = Point3(gs.rooftop.x, -gs.rooftop.y, gs.rooftop.h)
    return replace(gs, rooftop=flipped), True


def unmirror_point(p: Point3, mirrored: bool) -> Point3:
    return Point3(p.x, -p.y, p.h) if mirrored else p


@dataclass(frozen=True)
class OptimalSurface:
    """The boundary slice of the tether cone that contains the optimum.

    Parameterized by height h in [h_lo, h_hi] and azimuth psi in the
    counterclockwise interval of width ``psi_sweep`` starting at
    ``psi_start`` (the direction from the terrestrial station through the
    anchor, ending at the direction from the anchor to the hot-spot center).
    """

    cropped: CroppedCone
    psi_start: float
    psi_sweep: float

    @property
    def cone(self) -> SphericalCone:
        return self.cropped.cone

    @property
    def height_range(self) -> tuple[float, float]:
        return (self.cone.apex.h, self.cone.h_top)

    def psi_at(self, t: float) -> float:
        """Azimuth at fraction t in [0, 1] of the sweep."""
        return wrap_angle(self.psi_start + t * self.psi_sweep)

    def position(self, h: float, psi: float) -> Point3:
        r = cropped_radius(self.cropped, h, psi)
        apex = self.cone.apex
        return Point3(apex.x + r * math.cos(psi), apex.y + r * math.sin(psi), h)

    def grid(self, n_psi: int, n_h: int) -> list[Point3]:
        h_lo, h_hi = self.height_range
        return [
            self.position(h, self.psi_at(t))
            for t in np.linspace(0.0, 1.0, n_psi)
            for h in np.linspace(h_lo, h_hi, n_h)
        ]


def optimal_surface(scenario: Scenario, gs: GroundStation,
                    tether: TetherConfig) -> OptimalSurface:
    """Construct the optimal-placement surface for an upper-half-plane anchor.

    Raises GeometryError when the anchor projects onto the terrestrial
    station or the hot-spot center (the sweep directions degenerate) and
    ValueError for anchors with y < 0 (canonicalize first).
    """
    apex = gs.rooftop
    if apex.y < 0.0:
        raise ValueError("anchor below the symmetry axis; use mirror_canonicalize")
    gs_proj = project(apex)
    psi1 = angle_from_east(project(scenario.tbs), gs_proj)
    psi2 = angle_from_east(gs_proj, scenario.hotspot.center)
    sweep = wrap_angle(psi2 - psi1)
    return OptimalSurface(CroppedCone(tether.cone(gs)), psi1, sweep)


@dataclass(frozen=True)
class SearchResult:
    position: Point3
    value: float
    evaluations: int


def _tuav_objective(scenario: Scenario, abs_tol: float):
    def value(pos: Point3) -> float:
        return system_coverage_tuav(scenario, pos, abs_tol=abs_tol).value

    return value


def grid_search_tuav(scenario: Scenario, gs: GroundStation, tether: TetherConfig,
                     psi_step_deg: float = 1.0, n_h: int = 51,
                     abs_tol: float = SYSTEM_TOL) -> SearchResult:
    """Exhaustive search of the optimal surface."""
    canon, mirrored = mirror_canonicalize(gs)
    surface = optimal_surface(scenario, canon, tether)
    n_psi = max(2, int(math.ceil(math.degrees(surface.psi_sweep) / psi_step_deg)) + 1)
    objective = _tuav_objective(scenario, abs_tol)
    best_pos, best_val, evals = None, -math.inf, 0
    for pos in surface.grid(n_psi, n_h):
        val = objective(pos)
        evals += 1
        if val > best_val:
            best_pos, best_val = pos, val
    return SearchResult(unmirror_point(best_pos, mirrored), best_val, evals)


@dataclass(frozen=True)
class AnnealParams:
    """Simulated-annealing schedule for the surface search.

    Temperatures are in coverage-probability units; proposals are Gaussian
    steps in (h, psi) clamped to the surface rectangle.
    """

    t_initial: float = 0.05
    cooling: float = 0.9
    n_steps: int = 40
    proposals_per_step: int = 4
    h_std_frac: float = 0.1  # of the tether length
    psi_std: float = 0.2  # rad
    n_probe_psi: int = 8
    n_probe_h: int = 6


def anneal_tuav(scenario: Scenario, gs: GroundStation, tether: TetherConfig,
                seed: int | np.random.Generator = 0,
                params: AnnealParams = AnnealParams(),
                abs_tol: float = SYSTEM_TOL) -> SearchResult:
    """Coarse probe of the optimal surface followed by simulated annealing."""
    rng = np.random.default_rng(seed)
    canon, mirrored = mirror_canonicalize(gs)
    surface = optimal_surface(scenario, canon, tether)
    h_lo, h_hi = surface.height_range
    sweep = surface.psi_sweep
    objective = _tuav_objective(scenario, abs_tol)
    evals = 0

    def value_at(h: float, t: float) -> float:
        return objective(surface.position(h, surface.psi_at(t)))

    best_h, best_t, best_val = h_lo, 0.0, -math.inf
    for t in np.linspace(0.0, 1.0, params.n_probe_psi):
        for h in np.linspace(h_lo, h_hi, params.n_probe_h):
            val = value_at(h, t)
            evals += 1
            if val > best_val:
                best_h, best_t, best_val = h, t, val

    h, t, val = best_h, best_t, best_val
    temp = params.t_initial
    h_std = params.h_std_frac * tether.tether_len
    t_std = params.psi_std / sweep if sweep > 0.0 else 0.0
    for _ in range(params.n_steps):
        for _ in range(params.proposals_per_step):
            h_new = float(np.clip(h + rng.normal(0.0, h_std), h_lo, h_hi))
            t_new = float(np.clip(t + rng.normal(0.0, t_std), 0.0, 1.0)) if t_std else t
            val_new = value_at(h_new, t_new)
            evals += 1
            if val_new >= val or rng.random() < math.exp((val_new - val) / temp):
                h, t, val = h_new, t_new, val_new
                if val > best_val:
                    best_h, best_t, best_val = h, t, val
        temp *= params.cooling

    pos = surface.position(best_h, surface.psi_at(best_t))
    return SearchResult(unmirror_point(pos, mirrored), best_val, evals)


def grid_search_uuav(scenario: Scenario, duty_cycle: float = 1.0,
                     x_step: float = 8.0, h_step: float = 2.0,
                     x_range: tuple[float, float] | None = None,
                     h_range: tuple[float, float] = (10.0, 300.0),
                     refine: bool = True,
                     abs_tol: float = SYSTEM_TOL) -> SearchResult:
    """Free placement of the untethered vehicle on the symmetry plane y = 0.

    By reflection symmetry the optimum has y = 0, so the search is a 2-D
    grid over (x, h), optionally followed by two shrinking local passes.
    """
    if x_range is None:
        r = scenario.hotspot.radius
        c = scenario.hotspot.center
        x_range = (c.x - r, max(scenario.tbs.x, c.x + r))
    evals = 0

    def objective(x: float, h: float) -> float:
        pos = Point3(x, 0.0, h)
        if distance3(pos, scenario.tbs) <= 1e-9:
            return -math.inf  # on top of the terrestrial antenna; no backhaul
        return system_coverage_uuav(scenario, pos, duty_cycle, abs_tol=abs_tol).value

    def sweep_grid(xs, hs, best):
        nonlocal evals
        best_x, best_h, best_val = best
        for x in xs:
            for h in hs:
                val = objective(float(x), float(h))
                evals += 1
                if val > best_val:
                    best_x, best_h, best_val = float(x), float(h), val
        return best_x, best_h, best_val

    xs = np.arange(x_range[0], x_range[1] + 1e-9, x_step)
    hs = np.arange(h_range[0], h_range[1] + 1e-9, h_step)
    best = sweep_grid(xs, hs, (x_range[0], h_range[0], -math.inf))
    if refine:
        dx, dh = x_step, h_step
        for _ in range(2):
            dx, dh = dx / 4.0, dh / 4.0
            xs = best[0] + dx * np.arange(-4.0, 4.0 + 1e-9)
            hs = np.clip(best[1] + dh * np.arange(-4.0, 4.0 + 1e-9),
                         h_range[0], h_range[1])
            best = sweep_grid(xs, np.unique(hs), best)
    return SearchResult(Point3(best[0], 0.0, best[1]), best[2], evals)


def best_gs_selection(scenario: Scenario, stations: tuple[GroundStation, ...],
                      tether: TetherConfig,
                      seed: int | np.random.Generator = 0,
                      params: AnnealParams = AnnealParams(),
                      abs_tol: float = SYSTEM_TOL
                      ) -> tuple[GroundStation, SearchResult] | None:
    """Pick the accessible rooftop with the best probed coverage, then anneal.

    Candidates are ranked by a coarse probe of each surface; ties break on
    the rooftop coordinates so the result does not depend on input order.
    Returns None when no station is accessible (or all are degenerate).
    """
    rng = np.random.default_rng(seed)
    probes = []
    for gs in stations:
        if not gs.accessible:
            continue
        canon, _ = mirror_canonicalize(gs)
        try:
            surface = optimal_surface(scenario, canon, tether)
        except (GeometryError, ValueError):
            continue  # anchor on top of a sweep endpoint; no usable direction
        objective = _tuav_objective(scenario, abs_tol)
        probe = max(
            objective(surface.position(h, surface.psi_at(t)))
            for t in np.linspace(0.0, 1.0, params.n_probe_psi)
            for h in np.linspace(*surface.height_range, params.n_probe_h)
        )
        key = (gs.rooftop.x, gs.rooftop.y, gs.rooftop.h)
        probes.append((-probe, key, gs))
    if not probes:
        return None
    probes.sort(key=lambda item: item[:2])
    winner = probes[0][2]
    return winner, anneal_tuav(scenario, winner, tether, rng, params, abs_tol)


@dataclass(frozen=True)
class EnsembleResult:
    """Mean coverage over random rooftop draws, with a normal-theory CI."""

    mean: float
    std_error: float
    n_trials: int
    values: tuple[float, ...]

    def margin(self, z: float = 1.96) -> float:
        return z * self.std_error


def random_gs_ensemble(scenario: Scenario, tether: TetherConfig,
                       n_trials: int = 200, seed: int = 0,
                       accessibility: float = 0.2,
                       region_half: float | None = None,
                       params: AnnealParams = AnnealParams(),
                       abs_tol: float = SYSTEM_TOL) -> EnsembleResult:
    """Average tethered coverage over random rooftop fields.

    Each trial draws a Poisson number of rooftops (density gamma3 per km^2)
    uniformly over a square of half-side ``region_half`` around the hot-spot
    center, Rayleigh-distributed heights, and independent accessibility
    flags; inaccessible-only trials fall back to terrestrial-only coverage.
    Trials get independent child streams of ``seed``, so the estimate does
    not depend on n_trials ordering.
    """
    if not 0.0 <= accessibility <= 1.0:
        raise ValueError("accessibility must lie in [0, 1]")
    if region_half is None:
        region_half = scenario.hotspot.radius + tether.tether_len
    env = scenario.env
    p_tbs_only = coverage_tbs(scenario).value
    area_km2 = (2.0 * region_half / 1000.0) ** 2
    center = scenario.hotspot.center
    values = []
    for trial in range(n_trials):
        rng = np.random.default_rng([seed, trial])
        n = rng.poisson(env.gamma3 * area_km2)
        xs = center.x + rng.uniform(-region_half, region_half, size=n)
        ys = center.y + rng.uniform(-region_half, region_half, size=n)
        heights = sample_building_height(rng, env, size=n)
        open_flags = rng.random(n) < accessibility
        stations = tuple(
            GroundStation(Point3(float(x), float(y), float(h)), bool(a))
            for x, y, h, a in zip(xs, ys, heights, open_flags)
        )
        picked = best_gs_selection(scenario, stations, tether, rng, params, abs_tol)
        values.append(p_tbs_only if picked is None else picked[1].value)
    arr = np.asarray(values)
    se = float(arr.std(ddof=1) / math.sqrt(n_trials)) if n_trials > 1 else 0.0
    return EnsembleResult(float(arr.mean()), se, n_trials, tuple(values))

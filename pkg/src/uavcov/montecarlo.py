"""Monte Carlo estimators mirroring every analytic quantity.

Each estimator replays the generative story directly: drop a user in the
hot-spot, draw the LoS state from the elevation sigmoid, associate by the
biased ground-distance rule, draw the fading gains, compare SNR to the
threshold.  Estimates are deterministic functions of (config, arguments):
batches get independent child streams from a SeedSequence spawn, so results
do not depend on how many batches the sample count splits into.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .channel import DEG, elevation_sigmoid, los_probability_backhaul
from .coverage import (
    Scenario,
    Tethered,
    Untethered,
    UavMode,
    association_boundary,
)
from .distributions import HotSpot
from .geometry import Point2, Point3, distance2, project


@dataclass(frozen=True)
class UniformDisk:
    """Users uniform over the hot-spot disk."""


@dataclass(frozen=True)
class GaussianCluster:
    """Isotropic Gaussian around the hot-spot center, clipped to the disk."""

    std: float

    def __post_init__(self):
        if self.std <= 0.0:
            raise ValueError("std must be positive")


UserDistribution = UniformDisk | GaussianCluster


@dataclass(frozen=True)
class McConfig:
    n_samples: int
    seed: int
    batch_size: int = 1 << 19

    def __post_init__(self):
        if self.n_samples <= 0 or self.batch_size <= 0:
            raise ValueError("sample and batch counts must be positive")


@dataclass(frozen=True)
class McEstimate:
    mean: float
    std_error: float
    n: int

    def margin(self, z: float = 4.0) -> float:
        return z * self.std_error


@dataclass(frozen=True)
class Histogram:
    edges: np.ndarray
    density: np.ndarray
    n: int


# Link selectors for estimate_link_coverage.
@dataclass(frozen=True)
class TbsLink:
    pass


@dataclass(frozen=True)
class AccessLink:
    uav: Point3


@dataclass(frozen=True)
class BackhaulLink:
    uav: Point3


def _batch_streams(cfg: McConfig):
    n_batches = -(-cfg.n_samples // cfg.batch_size)
    children = np.random.SeedSequence(cfg.seed).spawn(n_batches)
    sizes = [cfg.batch_size] * (n_batches - 1)
    sizes.append(cfg.n_samples - cfg.batch_size * (n_batches - 1))
    return [(np.random.default_rng(c), s) for c, s in zip(children, sizes)]


def _sample_xy(rng: np.random.Generator, hotspot: HotSpot,
               distribution: UserDistribution, n: int):
    cx, cy, radius = hotspot.center.x, hotspot.center.y, hotspot.radius
    if isinstance(distribution, UniformDisk):
        r = radius * np.sqrt(rng.random(n))
        theta = rng.random(n) * (2.0 * math.pi)
        return cx + r * np.cos(theta), cy + r * np.sin(theta)
    xs = np.empty(n)
    ys = np.empty(n)
    filled = 0
    while filled < n:
        want = n - filled
        x = rng.normal(0.0, distribution.std, 2 * want)
        y = rng.normal(0.0, distribution.std, 2 * want)
        keep = x * x + y * y <= radius * radius
        take = min(int(keep.sum()), want)
        xs[filled:filled + take] = x[keep][:take]
        ys[filled:filled + take] = y[keep][:take]
        filled += take
    return cx + xs, cy + ys


def sample_user(rng: np.random.Generator, hotspot: HotSpot,
                distribution: UserDistribution = UniformDisk(), size=None):
    """One user position (Point2) or arrays (x, y) when ``size`` is given."""
    if size is None:
        x, y = _sample_xy(rng, hotspot, distribution, 1)
        return Point2(float(x[0]), float(y[0]))
    return _sample_xy(rng, hotspot, distribution, int(size))


def _indicator_estimate(cfg: McConfig, batch_fn) -> McEstimate:
    """Run batch_fn(rng, n) -> covered-count over all batches."""
    successes = 0
    for rng, n in _batch_streams(cfg):
        successes += int(batch_fn(rng, n))
    p = successes / cfg.n_samples
    se = math.sqrt(max(p * (1.0 - p), 0.0) / max(cfg.n_samples - 1, 1))
    return McEstimate(p, se, cfg.n_samples)


def estimate_distance_pdf(cfg: McConfig, hotspot: HotSpot, anchor: Point2,
                          bins=100, distribution: UserDistribution = UniformDisk()
                          ) -> Histogram:
    """Histogram density of the user -> anchor ground distance."""
    d = distance2(anchor, hotspot.center)
    if isinstance(bins, int):
        edges = np.linspace(max(0.0, d - hotspot.radius), d + hotspot.radius, bins + 1)
    else:
        edges = np.asarray(bins, dtype=float)
    counts = np.zeros(len(edges) - 1, dtype=np.int64)
    for rng, n in _batch_streams(cfg):
        x, y = _sample_xy(rng, hotspot, distribution, n)
        r = np.hypot(x - anchor.x, y - anchor.y)
        counts += np.histogram(r, bins=edges)[0]
    density = counts / (cfg.n_samples * np.diff(edges))
    return Histogram(edges, density, cfg.n_samples)


def estimate_conditional_pdf(cfg: McConfig, hotspot: HotSpot, tbs_proj: Point2,
                             uav_proj: Point2, r_b: float, band: float = 0.5,
                             bins=60, min_survivors: int = 10_000) -> Histogram:
    """Histogram of r_u among users with |r_b_sample - r_b| <= band.

    Draws up to ``cfg.n_samples`` users but stops early once
    ``min_survivors`` conditioned samples have been collected.
    """
    d_bu = distance2(tbs_proj, uav_proj)
    if abs(d_bu - r_b) <= band:
        vmin = 0.0
    else:
        vmin = min(abs(d_bu - (r_b - band)), abs(d_bu - (r_b + band)))
    vmax = d_bu + r_b + band
    if isinstance(bins, int):
        edges = np.linspace(max(0.0, vmin), vmax, bins + 1)
    else:
        edges = np.asarray(bins, dtype=float)
    counts = np.zeros(len(edges) - 1, dtype=np.int64)
    survivors = 0
    for rng, n in _batch_streams(cfg):
        x, y = _sample_xy(rng, hotspot, UniformDisk(), n)
        rb = np.hypot(x - tbs_proj.x, y - tbs_proj.y)
        keep = np.abs(rb - r_b) <= band
        ru = np.hypot(x[keep] - uav_proj.x, y[keep] - uav_proj.y)
        counts += np.histogram(ru, bins=edges)[0]
        survivors += int(keep.sum())
        if survivors >= min_survivors:
            break
    if survivors == 0:
        raise RuntimeError(f"no samples landed in the band around r_b={r_b}")
    density = counts / (survivors * np.diff(edges))
    return Histogram(edges, density, survivors)


# ---------------------------------------------------------------------------
# Coverage estimators
# ---------------------------------------------------------------------------

def _aerial_snr(scenario: Scenario, gains, dist2_3d, los_mask):
    link = scenario.link
    eta = np.where(los_mask, link.eta_los, link.eta_nlos)
    return link.rho_u * gains * dist2_3d ** (-0.5 * link.alpha_u) / (link.sigma_n2 * eta)


def estimate_link_coverage(cfg: McConfig, scenario: Scenario, link_kind,
                           distribution: UserDistribution = UniformDisk()
                           ) -> McEstimate:
    """Coverage probability of one link in isolation."""
    link, thr = scenario.link, scenario.threshold
    hotspot = scenario.hotspot
    tbs = scenario.tbs

    if isinstance(link_kind, TbsLink):
        def batch(rng, n):
            x, y = _sample_xy(rng, hotspot, distribution, n)
            d2 = (x - tbs.x) ** 2 + (y - tbs.y) ** 2 + tbs.h ** 2
            g = rng.exponential(1.0 / link.mu, n)
            snr = link.rho_b * g * d2 ** (-0.5 * link.alpha_b) / link.sigma_n2
            return np.count_nonzero(snr > thr.beta)
        return _indicator_estimate(cfg, batch)

    if isinstance(link_kind, AccessLink):
        uav = link_kind.uav

        def batch(rng, n):
            x, y = _sample_xy(rng, hotspot, distribution, n)
            d2 = (x - uav.x) ** 2 + (y - uav.y) ** 2 + uav.h ** 2
            elev = DEG * np.arcsin(uav.h / np.sqrt(d2))
            los = rng.random(n) < elevation_sigmoid(scenario.env.a_r,
                                                    scenario.env.b_r, elev)
            g = rng.gamma(link.m, 1.0 / link.m, n)
            return np.count_nonzero(_aerial_snr(scenario, g, d2, los) > thr.beta)
        return _indicator_estimate(cfg, batch)

    if isinstance(link_kind, BackhaulLink):
        uav = link_kind.uav
        kappa = los_probability_backhaul(scenario.env, tbs, uav)
        d2 = (uav.x - tbs.x) ** 2 + (uav.y - tbs.y) ** 2 + (uav.h - tbs.h) ** 2

        def batch(rng, n):
            los = rng.random(n) < kappa
            g = rng.gamma(link.m, 1.0 / link.m, n)
            return np.count_nonzero(_aerial_snr(scenario, g, d2, los) > thr.beta)
        return _indicator_estimate(cfg, batch)

    raise TypeError(f"unknown link kind {link_kind!r}")


def _system_batch(scenario: Scenario, uav: Point3, mode: UavMode,
                  distribution: UserDistribution, want: str):
    """Factory for the per-batch sampler of system coverage / association."""
    link, thr = scenario.link, scenario.threshold
    bnd = association_boundary(scenario)
    tbs = scenario.tbs
    untethered = isinstance(mode, Untethered)
    if untethered:
        kappa_bu = los_probability_backhaul(scenario.env, tbs, uav)
        d2_bu = (uav.x - tbs.x) ** 2 + (uav.y - tbs.y) ** 2 + (uav.h - tbs.h) ** 2

    def batch(rng, n):
        x, y = _sample_xy(rng, scenario.hotspot, distribution, n)
        r_b = np.hypot(x - tbs.x, y - tbs.y)
        r_u = np.hypot(x - uav.x, y - uav.y)
        d2_u = r_u * r_u + uav.h ** 2
        elev = DEG * np.arcsin(uav.h / np.sqrt(np.maximum(d2_u, 1e-300)))
        los = rng.random(n) < elevation_sigmoid(scenario.env.a_r,
                                                scenario.env.b_r, elev)
        lam = np.where(los, bnd.lambda_los(r_b), bnd.lambda_nlos(r_b))
        on_uav = r_u <= lam
        g_u = rng.gamma(link.m, 1.0 / link.m, n)
        g_b = rng.exponential(1.0 / link.mu, n)
        uav_ok = _aerial_snr(scenario, g_u, d2_u, los) > thr.beta
        d2_b = r_b * r_b + tbs.h ** 2
        tbs_ok = link.rho_b * g_b * d2_b ** (-0.5 * link.alpha_b) / link.sigma_n2 > thr.beta
        if untethered:
            avail = rng.random(n) < mode.duty_cycle
            los_bu = rng.random(n) < kappa_bu
            g_bu = rng.gamma(link.m, 1.0 / link.m, n)
            bu_ok = _aerial_snr(scenario, g_bu, d2_bu, los_bu) > thr.beta
            if want == "association":
                return np.count_nonzero(avail & on_uav)
            covered = np.where(avail, np.where(on_uav, uav_ok & bu_ok, tbs_ok), tbs_ok)
        else:
            if want == "association":
                return np.count_nonzero(on_uav)
            covered = np.where(on_uav, uav_ok, tbs_ok)
        return np.count_nonzero(covered)

    return batch


def estimate_system_coverage(cfg: McConfig, scenario: Scenario, uav: Point3,
                             mode: UavMode = Tethered(),
                             distribution: UserDistribution = UniformDisk()
                             ) -> McEstimate:
    """End-to-end coverage of the TBS + UAV system."""
    return _indicator_estimate(
        cfg, _system_batch(scenario, uav, mode, distribution, "coverage"))


def estimate_association_probability(cfg: McConfig, scenario: Scenario, uav: Point3,
                                     mode: UavMode = Tethered(),
                                     distribution: UserDistribution = UniformDisk()
                                     ) -> McEstimate:
    """Fraction of users served by the UAV (availability-weighted if untethered)."""
    return _indicator_estimate(
        cfg, _system_batch(scenario, uav, mode, distribution, "association"))

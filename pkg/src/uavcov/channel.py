"""Air-to-ground / terrestrial channel models.

Power quantities are linear milliwatts inside the library; dB(m) only at the
config boundary.  Elevation-angle sigmoids take the angle in degrees (that is
the convention the (a, b) fits use).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .geometry import Point2, Point3, distance3, project

DEG = 180.0 / math.pi


def dbm_to_mw(v: float) -> float:
    return 10.0 ** (v / 10.0)


def mw_to_dbm(v: float) -> float:
    return 10.0 * math.log10(v)


def db_to_linear(v: float) -> float:
    return 10.0 ** (v / 10.0)


def linear_to_db(v: float) -> float:
    return 10.0 * math.log10(v)


@dataclass(frozen=True)
class EnvironmentParams:
    """Statistical built-up environment and its elevation-sigmoid fits."""

    gamma1: float  # Rayleigh scale of building heights [m]
    gamma2: float  # fraction of land covered by buildings
    gamma3: float  # buildings per km^2
    a_r: float     # access-link sigmoid parameters (elevation in degrees)
    b_r: float
    a_b: float     # backhaul-link sigmoid parameters
    b_b: float


DENSE_URBAN = EnvironmentParams(gamma1=20.0, gamma2=0.3, gamma3=300.0,
                                a_r=13.0, b_r=0.22, a_b=7.0, b_b=0.2)
HIGH_RISE = EnvironmentParams(gamma1=50.0, gamma2=0.5, gamma3=300.0,
                              a_r=22.0, b_r=0.18, a_b=11.0, b_b=0.16)

ENVIRONMENT_PRESETS = {"dense_urban": DENSE_URBAN, "high_rise": HIGH_RISE}


@dataclass(frozen=True)
class LinkParams:
    """Transmit powers, noise, path-loss exponents and fading orders.

    Linear units: powers in mW, excess losses as linear factors.
    """

    rho_b: float       # TBS transmit power [mW]
    rho_u: float       # UAV transmit power [mW]
    sigma_n2: float    # noise power [mW]
    alpha_b: float     # terrestrial path-loss exponent
    alpha_u: float     # air-to-ground path-loss exponent
    eta_los: float     # excess loss, LoS [linear]
    eta_nlos: float    # excess loss, NLoS [linear]
    m: int = 2         # Nakagami shape of the aerial links
    mu: float = 1.0    # rate of the exponential (Rayleigh power) gain

    def __post_init__(self):
        if self.eta_nlos < self.eta_los:
            raise ValueError("NLoS excess loss cannot be smaller than LoS")
        if min(self.rho_b, self.rho_u, self.sigma_n2, self.mu) <= 0.0:
            raise ValueError("powers, noise and mu must be positive")
        if self.m < 1 or self.m != int(self.m):
            raise ValueError("Nakagami shape m must be a positive integer")
        if min(self.alpha_b, self.alpha_u) <= 0.0:
            raise ValueError("path-loss exponents must be positive")


@dataclass(frozen=True)
class SnrThreshold:
    """SNR decoding threshold with the noise-normalized forms cached."""

    beta: float         # linear SNR threshold
    beta_bar_b: float   # sigma_n2 * beta / rho_b
    beta_bar_u: float   # sigma_n2 * beta / rho_u

    @classmethod
    def from_link(cls, beta: float, link: LinkParams) -> "SnrThreshold":
        if beta <= 0.0:
            raise ValueError("threshold must be positive")
        return cls(beta, link.sigma_n2 * beta / link.rho_b,
                   link.sigma_n2 * beta / link.rho_u)


def los_probability_exact(env: EnvironmentParams, a: Point3, b: Point3) -> float:
    """LoS probability from the explicit building-crossing product.

    The expected building count uses the ground distance in km (gamma3 is per
    km^2).  Endpoint heights interpolate linearly across the crossed rows.
    """
    hi, lo = (a, b) if a.h >= b.h else (b, a)
    d_ground = math.hypot(a.x - b.x, a.y - b.y)
    n_cross = (d_ground / 1000.0) * math.sqrt(env.gamma2 * env.gamma3)
    k_max = math.floor(n_cross - 1.0)
    if k_max < 0:
        return 1.0
    prob = 1.0
    inv2g2 = 1.0 / (2.0 * env.gamma1 ** 2)
    for k in range(k_max + 1):
        h_k = hi.h - (k + 0.5) * (hi.h - lo.h) / (k_max + 1.0)
        prob *= 1.0 - math.exp(-h_k * h_k * inv2g2)
    return prob


def elevation_sigmoid(a: float, b: float, elev_deg):
    """Logistic LoS probability in the elevation angle (degrees). Vectorized."""
    return 1.0 / (1.0 + a * np.exp(-b * (np.asarray(elev_deg, dtype=float) - a)))


def los_probability_access(env: EnvironmentParams, uav: Point3, user: Point2) -> float:
    """Sigmoid LoS probability of the UAV -> ground-user link."""
    d = distance3(uav, Point3(user.x, user.y, 0.0))
    elev = 90.0 if d == 0.0 else DEG * math.asin(uav.h / d)
    return float(elevation_sigmoid(env.a_r, env.b_r, elev))


def los_probability_backhaul(env: EnvironmentParams, tbs: Point3, uav: Point3) -> float:
    """Sigmoid LoS probability of the TBS -> UAV backhaul link."""
    d = distance3(tbs, uav)
    if d == 0.0:
        raise ValueError("backhaul endpoints coincide")
    elev = DEG * math.asin((uav.h - tbs.h) / d)
    return float(elevation_sigmoid(env.a_b, env.b_b, elev))


def mean_snr_terrestrial(link: LinkParams, tbs: Point3, user: Point2) -> float:
    """Average received SNR of the TBS link at a ground user (unit-mean fading)."""
    d = distance3(tbs, Point3(user.x, user.y, 0.0))
    if d == 0.0:
        raise ValueError("user sits on the TBS")
    return link.rho_b * d ** (-link.alpha_b) / link.sigma_n2


def mean_snr_aerial(link: LinkParams, uav: Point3, user: Point2, los: bool) -> float:
    """Average received SNR of the UAV access link for a given LoS state."""
    d = distance3(uav, Point3(user.x, user.y, 0.0))
    if d == 0.0:
        raise ValueError("user sits on the UAV")
    eta = link.eta_los if los else link.eta_nlos
    return link.rho_u * d ** (-link.alpha_u) / (link.sigma_n2 * eta)


def rayleigh_gain_ccdf(g, mu: float = 1.0):
    """P(exponential power gain > g) for gain rate mu. Vectorized."""
    return np.exp(-mu * np.asarray(g, dtype=float))


def nakagami_gain_ccdf(g, m: int):
    """P(unit-mean Gamma(m, rate m) power gain > g): sum_{k<m} (mg)^k/k! e^{-mg}."""
    x = m * np.asarray(g, dtype=float)
    term = np.ones_like(x)
    acc = np.ones_like(x)
    for k in range(1, int(m)):
        term = term * x / k
        acc = acc + term
    return acc * np.exp(-x)


def sample_rayleigh_gain(rng: np.random.Generator, mu: float = 1.0, size=None):
    """Exponential power gain with rate mu (mean 1/mu)."""
    return rng.exponential(scale=1.0 / mu, size=size)


def sample_nakagami_gain(rng: np.random.Generator, m: int, size=None):
    """Unit-mean Gamma power gain of a Nakagami-m envelope: Gamma(m, rate m)."""
    return rng.gamma(shape=m, scale=1.0 / m, size=size)


def sample_building_height(rng: np.random.Generator, env: EnvironmentParams, size=None):
    """Rayleigh-distributed building/rooftop height with scale gamma1."""
    return rng.rayleigh(scale=env.gamma1, size=size)

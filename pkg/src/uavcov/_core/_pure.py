"""Pure-numpy backend for the coverage integrals.

Mirrors the compiled kernels piece-for-piece: the same marginal panels, the
same conditional-law breakpoints and association cuts, the same 7/15 rule
with square-root endpoint substitutions.  The compiled extension exists only
for speed; tests pin the two backends against each other.
"""

from __future__ import annotations

import math

import numpy as np

from ..distributions import (
    HotSpot,
    conditional_geometry,
    conditional_segment_bounds,
    marginal_distance_pdf,
)
from ..geometry import GeometryError, Point2
from ..quadrature import GK_NODES, GK_WEIGHTS, integrate_adaptive

DEG = 180.0 / math.pi

# A piece endpoint within this fraction of the piece width of a support edge
# gets the square-root substitution anchored at the edge itself: the density
# blows up like 1 / sqrt(edge - x) there, and a plain 15-point panel cannot
# resolve the boundary layer when the edge sits just beyond the endpoint.
_NEAR = 0.1


def _piece_nodes(a: float, b: float, vmin: float, vmax: float):
    """15-point nodes/weights on [a, b] for the conditional distance density.

    Substitutes x = vmin + u**2 (or vmax - u**2) when the corresponding
    support edge is at or near an endpoint; exact for the inverse-square-root
    factor because the substitution is anchored at the edge, not at the
    endpoint.
    """
    width = b - a
    if a - vmin <= _NEAR * width:
        u0, u1 = math.sqrt(max(a - vmin, 0.0)), math.sqrt(b - vmin)
        u = u0 + 0.5 * (GK_NODES + 1.0) * (u1 - u0)
        return vmin + u * u, GK_WEIGHTS * (u1 - u0) * u
    if vmax - b <= _NEAR * width:
        u0, u1 = math.sqrt(max(vmax - b, 0.0)), math.sqrt(vmax - a)
        u = u0 + 0.5 * (GK_NODES + 1.0) * (u1 - u0)
        return vmax - u * u, GK_WEIGHTS * (u1 - u0) * u
    half = 0.5 * width
    return a + half * (GK_NODES + 1.0), GK_WEIGHTS * half


def _gamma_ccdf(x: np.ndarray, m: int) -> np.ndarray:
    """Upper tail sum_{k<m} x^k / k! * exp(-x) of a Gamma(m, 1) at x."""
    x = np.asarray(x, dtype=float)
    term = np.ones_like(x)
    acc = np.ones_like(x)
    for k in range(1, m):
        term = term * x / k
        acc = acc + term
    return acc * np.exp(-x)


def link_coverage_tbs(R_o, d_anchor, h_b, mu, beta_b, alpha_b,
                      abs_tol=1e-6, max_evals=100_000):
    """Coverage of the terrestrial link over a uniform hot-spot user."""
    marg = marginal_distance_pdf(HotSpot(Point2(0.0, 0.0), R_o), Point2(d_anchor, 0.0))

    def f(r):
        d_a = (r * r + h_b * h_b) ** (0.5 * alpha_b)
        return marg(r) * np.exp(-mu * beta_b * d_a)

    return integrate_adaptive(f, marg.panels(), abs_tol=abs_tol, max_evals=max_evals)


def link_coverage_uav(R_o, d_anchor, h_u, m, beta_u, alpha_u, eta_l, eta_n,
                      a_r, b_r, abs_tol=1e-6, max_evals=100_000):
    """Coverage of the aerial access link, LoS/NLoS parts returned separately."""
    marg = marginal_distance_pdf(HotSpot(Point2(0.0, 0.0), R_o), Point2(d_anchor, 0.0))
    m = int(m)

    def f(r):
        r = np.asarray(r, dtype=float)
        d2 = r * r + h_u * h_u
        d3 = np.sqrt(d2)
        elev = DEG * np.arcsin(np.clip(np.divide(h_u, d3, out=np.ones_like(d3),
                                                 where=d3 > 0.0), -1.0, 1.0))
        kl = 1.0 / (1.0 + a_r * np.exp(-b_r * (elev - a_r)))
        d_a = d2 ** (0.5 * alpha_u)
        fm = marg(r)
        cov_l = _gamma_ccdf(m * beta_u * eta_l * d_a, m)
        cov_n = _gamma_ccdf(m * beta_u * eta_n * d_a, m)
        return np.stack([fm * kl * cov_l, fm * (1.0 - kl) * cov_n], axis=1)

    val, err = integrate_adaptive(f, marg.panels(), abs_tol=abs_tol, max_evals=max_evals)
    return float(val[0] + val[1]), err, float(val[0]), float(val[1])


def system_coverage(R_o, d_bo, d_bu, chi, h_b, h_u, mu, m, beta_b, beta_u,
                    alpha_b, alpha_u, eta_l, eta_n, a_r, b_r, power_ratio,
                    assoc_only=False, abs_tol=1e-5, max_evals=100_000):
    """Joint user-distance integral with threshold-in-ground-distance association.

    Returns (uav_los, uav_nlos, tbs_los, tbs_nlos, error): the four
    LoS-weighted association regions of the coverage probability, or of the
    plain association mass when ``assoc_only`` (then the four sum to one).
    """
    if d_bu <= 1e-12:
        raise ValueError("coincident ground projections: integrate the atom case instead")
    m = int(m)
    hotspot = HotSpot(Point2(0.0, 0.0), R_o)
    tbs = Point2(d_bo, 0.0)
    theta_u = math.pi + chi if d_bo > 1e-12 else 0.0
    uav = Point2(tbs.x + d_bu * math.cos(theta_u), d_bu * math.sin(theta_u))
    marg = marginal_distance_pdf(hotspot, tbs)
    inv_alpha_u = 1.0 / alpha_u

    def inner(r_b: float) -> np.ndarray:
        acc = np.zeros(4)
        try:
            geom = conditional_geometry(hotspot, tbs, uav, r_b)
        except (ValueError, GeometryError):
            return acc  # support-boundary dust from deep bisection
        bounds = conditional_segment_bounds(geom)
        if not bounds:
            return acc
        vmin, vmax = bounds[0][0], bounds[-1][1]
        inv_dens = 1.0 / (2.0 * geom.phi_o * d_bu * r_b)
        lam_l = (power_ratio * r_b ** alpha_b / eta_l) ** inv_alpha_u
        lam_n = (power_ratio * r_b ** alpha_b / eta_n) ** inv_alpha_u
        p_br = math.exp(-mu * beta_b * (r_b * r_b + h_b * h_b) ** (0.5 * alpha_b))
        for lo, hi, n in bounds:
            if n == 0.0 or hi - lo <= 0.0:
                continue
            cuts = [lo] + [x for x in (lam_n, lam_l) if lo < x < hi] + [hi]
            pieces = []
            for a, b in zip(cuts, cuts[1:]):
                if b - a <= 0.0:
                    continue
                near = _NEAR * (b - a)
                if a - vmin <= near and vmax - b <= near:  # both edges close: halve
                    mid = 0.5 * (a + b)
                    pieces += [(a, mid), (mid, b)]
                else:
                    pieces.append((a, b))
            for a, b in pieces:
                x, wk = _piece_nodes(a, b, vmin, vmax)
                c = np.clip((d_bu * d_bu + r_b * r_b - x * x)
                            / (2.0 * d_bu * r_b), -1.0, 1.0)
                sin_phi = np.sqrt(np.maximum(1.0 - c * c, 0.0))
                dens = np.zeros_like(x)
                ok = sin_phi > 0.0
                dens[ok] = n * x[ok] * inv_dens / sin_phi[ok]
                w = wk * dens
                d2 = x * x + h_u * h_u
                d3 = np.sqrt(d2)
                elev = DEG * np.arcsin(np.clip(np.divide(h_u, d3, out=np.ones_like(d3),
                                                         where=d3 > 0.0), -1.0, 1.0))
                kl = 1.0 / (1.0 + a_r * np.exp(-b_r * (elev - a_r)))
                kn = 1.0 - kl
                if assoc_only:
                    cov_l = cov_n = 1.0
                    p_tbs = 1.0
                else:
                    d_a = d2 ** (0.5 * alpha_u)
                    cov_l = _gamma_ccdf(m * beta_u * eta_l * d_a, m)
                    cov_n = _gamma_ccdf(m * beta_u * eta_n * d_a, m)
                    p_tbs = p_br
                if b <= lam_l:
                    acc[0] += float(np.sum(w * kl * cov_l))
                else:
                    acc[2] += p_tbs * float(np.sum(w * kl))
                if b <= lam_n:
                    acc[1] += float(np.sum(w * kn * cov_n))
                else:
                    acc[3] += p_tbs * float(np.sum(w * kn))
        return acc

    def outer(r_arr):
        fm = marg(r_arr)
        rows = np.zeros((len(r_arr), 4))
        for i, (r_b, f_val) in enumerate(zip(r_arr, fm)):
            if f_val > 0.0:
                rows[i] = f_val * inner(float(r_b))
        return rows

    val, err = integrate_adaptive(outer, marg.panels(), abs_tol=abs_tol,
                                  max_evals=max_evals)
    return float(val[0]), float(val[1]), float(val[2]), float(val[3]), err

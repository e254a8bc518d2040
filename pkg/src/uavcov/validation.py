"""Self-checks pitting the closed forms against simulation and identities.

The battery is intentionally cheap (a couple of seconds): it exists so a
``validate`` run can certify an installation or a custom config before a
long optimization, not to re-prove the model.  Tolerances on the Monte Carlo
comparisons are four standard errors with an absolute floor.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from ._core import BACKEND_NAME, get_backend
from .config import RunConfig
from .coverage import (
    Tethered,
    Untethered,
    coverage_tbs,
    coverage_uav_access,
    system_coverage_tuav,
    system_coverage_uuav,
)
from .distributions import (
    conditional_distance_cdf,
    conditional_geometry,
    marginal_distance_pdf,
)
from .geometry import Point3, project
from .montecarlo import (
    AccessLink,
    McConfig,
    TbsLink,
    estimate_link_coverage,
    estimate_system_coverage,
)

__all__ = ["CheckResult", "run_validation"]


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    value: float
    reference: float
    tolerance: float
    detail: str = ""


def _check(name, value, reference, tolerance, detail=""):
    return CheckResult(name, abs(value - reference) <= tolerance,
                       float(value), float(reference), float(tolerance), detail)


def run_validation(cfg: RunConfig, seed: int = 0,
                   n_samples: int = 200_000) -> list[CheckResult]:
    scenario = cfg.scenario
    uav = cfg.uav
    if uav.y != 0.0:
        # the mirror check needs an off-axis point anyway
        uav_off = uav
    else:
        uav_off = Point3(uav.x, 0.35 * scenario.hotspot.radius, uav.h)
    mc = McConfig(n_samples=n_samples, seed=seed)
    checks: list[CheckResult] = []

    marg = marginal_distance_pdf(scenario.hotspot, project(scenario.tbs))
    checks.append(_check("marginal-pdf-normalization",
                         marg.normalization(), 1.0, 1e-7))

    lo, hi = marg.support()
    r_b = 0.5 * (lo + hi)
    geom = conditional_geometry(scenario.hotspot, project(scenario.tbs),
                                project(uav), r_b)
    checks.append(_check("conditional-cdf-total-mass",
                         conditional_distance_cdf(geom, geom.d_bu + r_b),
                         1.0, 1e-9, detail=f"conditioned at r_b={r_b:.3f}"))

    est = estimate_link_coverage(mc, scenario, TbsLink())
    checks.append(_check("tbs-coverage-vs-mc", coverage_tbs(scenario).value,
                         est.mean, max(0.005, 4.0 * est.std_error),
                         detail=f"n={est.n}"))

    est = estimate_link_coverage(mc, scenario, AccessLink(uav))
    checks.append(_check("uav-access-vs-mc",
                         coverage_uav_access(scenario, uav).value,
                         est.mean, max(0.005, 4.0 * est.std_error),
                         detail=f"n={est.n}"))

    if isinstance(cfg.mode, Untethered):
        system = system_coverage_uuav(scenario, uav, cfg.mode.duty_cycle).value
    else:
        system = system_coverage_tuav(scenario, uav).value
    est = estimate_system_coverage(mc, scenario, uav, cfg.mode)
    checks.append(_check("system-vs-mc", system, est.mean,
                         max(0.005, 4.0 * est.std_error), detail=f"n={est.n}"))

    p_tbs = coverage_tbs(scenario).value
    checks.append(_check("untethered-zero-duty-identity",
                         system_coverage_uuav(scenario, uav, 0.0).value,
                         p_tbs, 1e-9))

    p0 = system_coverage_uuav(scenario, uav, 0.0).value
    p1 = system_coverage_uuav(scenario, uav, 1.0).value
    checks.append(_check("untethered-affine-in-duty",
                         system_coverage_uuav(scenario, uav, 0.5).value,
                         0.5 * (p0 + p1), 1e-9))

    mirrored = Point3(uav_off.x, -uav_off.y, uav_off.h)
    checks.append(_check("mirror-symmetry",
                         system_coverage_tuav(scenario, uav_off).value,
                         system_coverage_tuav(scenario, mirrored).value, 1e-6))

    if BACKEND_NAME == "compiled":
        pure = get_backend("pure")
        compiled = get_backend("compiled")
        d_bo = scenario.d_bo
        d_bu = math.hypot(uav_off.x - scenario.tbs.x, uav_off.y)
        args = (scenario.hotspot.radius, max(d_bo, 1e-6), d_bu,
                0.5, scenario.tbs.h, uav_off.h, scenario.link.mu, scenario.link.m,
                scenario.threshold.beta_bar_b, scenario.threshold.beta_bar_u,
                scenario.link.alpha_b, scenario.link.alpha_u,
                scenario.link.eta_los, scenario.link.eta_nlos,
                scenario.env.a_r, scenario.env.b_r,
                scenario.link.rho_u / scenario.link.rho_b)
        p_val = pure.system_coverage(*args)
        c_val = compiled.system_coverage(*args)
        checks.append(_check("backend-parity", sum(c_val[:4]), sum(p_val[:4]), 1e-9))
    else:
        checks.append(CheckResult("backend-parity", True, 0.0, 0.0, 0.0,
                                  "compiled backend not built; skipped"))
    return checks

"""Coverage analysis for aerial base stations serving a circular hot-spot.

Analytic coverage probabilities (terrestrial, aerial access, backhaul, and
the full tethered/untethered system with distance-based association),
matching Monte Carlo estimators, and placement optimizers over the tethered
reachable set.
"""

from ._core import BACKEND_NAME
from .channel import (
    DENSE_URBAN,
    ENVIRONMENT_PRESETS,
    HIGH_RISE,
    EnvironmentParams,
    LinkParams,
    SnrThreshold,
)
from .config import RunConfig, build_config, config_hash, default_config, load_config
from .coverage import (
    Association,
    CoverageResult,
    Scenario,
    Tethered,
    Untethered,
    association_boundary,
    association_probability,
    classify_user,
    coverage_backhaul,
    coverage_end_to_end,
    coverage_tbs,
    coverage_uav_access,
    kernel_tbs,
    kernel_uav,
    system_coverage_tuav,
    system_coverage_uuav,
)
from .deployment import (
    AnnealParams,
    EnsembleResult,
    GroundStation,
    OptimalSurface,
    SearchResult,
    TetherConfig,
    anneal_tuav,
    best_gs_selection,
    grid_search_tuav,
    grid_search_uuav,
    optimal_surface,
    random_gs_ensemble,
)
from .distributions import (
    HotSpot,
    PiecewisePdf,
    conditional_distance_cdf,
    conditional_distance_pdf,
    conditional_geometry,
    marginal_distance_cdf,
    marginal_distance_pdf,
    pdf_breakpoints,
)
from .geometry import Circle, CroppedCone, Point2, Point3, SphericalCone
from .quadrature import Panel, integrate_adaptive
from .validation import CheckResult, run_validation

__version__ = "0.1.0"

__all__ = [
    "BACKEND_NAME", "DENSE_URBAN", "HIGH_RISE", "ENVIRONMENT_PRESETS",
    "EnvironmentParams", "LinkParams", "SnrThreshold", "Association",
    "CoverageResult", "Scenario", "Tethered", "Untethered",
    "association_boundary", "association_probability", "classify_user",
    "coverage_backhaul", "coverage_end_to_end", "coverage_tbs",
    "coverage_uav_access", "kernel_tbs", "kernel_uav",
    "system_coverage_tuav", "system_coverage_uuav", "HotSpot",
    "PiecewisePdf", "conditional_distance_cdf", "conditional_distance_pdf",
    "conditional_geometry", "marginal_distance_cdf", "marginal_distance_pdf",
    "pdf_breakpoints", "Circle", "CroppedCone", "Point2", "Point3",
    "SphericalCone", "Panel", "integrate_adaptive",
    "RunConfig", "build_config", "config_hash", "default_config", "load_config",
    "AnnealParams", "EnsembleResult", "GroundStation", "OptimalSurface",
    "SearchResult", "TetherConfig", "anneal_tuav", "best_gs_selection",
    "grid_search_tuav", "grid_search_uuav", "optimal_surface",
    "random_gs_ensemble", "CheckResult", "run_validation", "__version__",
]

"""Coverage-probability tests: pointwise kernels, the three link-level
probabilities, and the system-level piecewise association integrals.

Spot values were cross-checked against an independent quadrature route
(scipy.integrate.quad over the same kernels and densities); the live scipy
comparison for the terrestrial link is kept here as a dual-route guard.
"""

import math

import numpy as np
import pytest

from uavcov.coverage import (
    LINK_TOL,
    SYSTEM_TOL,
    Association,
    AssociationBoundary,
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
from uavcov.channel import elevation_sigmoid, los_probability_backhaul
from uavcov.distributions import HotSpot, marginal_distance_pdf
from uavcov.geometry import Point2, Point3
from uavcov.quadrature import QuadratureError

UAV_CENTER = Point3(0.0, 0.0, 100.0)


class TestKernels:
    def test_tbs_kernel_spot_value(self, baseline):
        val = kernel_tbs(baseline.threshold, baseline.link, 100.0, 10.0)
        assert float(val) == pytest.approx(0.886086295253472, rel=1e-12)

    def test_tbs_kernel_is_rayleigh_ccdf(self, baseline):
        r = 140.0
        d3 = math.hypot(r, 10.0)
        expected = math.exp(-baseline.threshold.beta_bar_b * d3 ** 3.0)
        assert float(kernel_tbs(baseline.threshold, baseline.link, r, 10.0)) == \
            pytest.approx(expected, rel=1e-13)

    def test_uav_kernel_against_gamma_sf(self, baseline):
        stats = pytest.importorskip("scipy.stats")
        r = np.array([10.0, 80.0, 200.0])
        for los, eta in ((True, baseline.link.eta_los),
                         (False, baseline.link.eta_nlos)):
            d3 = np.hypot(r, 100.0)
            x = baseline.threshold.beta_bar_u * eta * d3 ** 2.7
            np.testing.assert_allclose(
                kernel_uav(baseline.threshold, baseline.link, r, 100.0, los),
                stats.gamma.sf(x, a=2, scale=0.5), rtol=1e-12)

    def test_kernels_vectorize(self, baseline):
        out = kernel_tbs(baseline.threshold, baseline.link,
                         np.linspace(0.0, 300.0, 7), 10.0)
        assert out.shape == (7,)
        assert np.all(np.diff(out) < 0.0)  # farther is worse


class TestLinkCoverage:
    def test_tbs_value(self, baseline):
        res = coverage_tbs(baseline)
        assert res.value == pytest.approx(0.46726474564012543, abs=1e-8)
        assert res.quad_error <= LINK_TOL

    def test_tbs_against_scipy(self, baseline):
        integrate = pytest.importorskip("scipy.integrate")
        pdf = marginal_distance_pdf(baseline.hotspot, Point2(170.0, 0.0))

        def f(r):
            return float(kernel_tbs(baseline.threshold, baseline.link,
                                    r, 10.0)) * pdf(r)

        val, _ = integrate.quad(f, 20.0, 320.0, points=[20.0, 320.0],
                                limit=200, epsabs=1e-11)
        assert coverage_tbs(baseline).value == pytest.approx(val, abs=1e-8)

    def test_access_values(self, baseline):
        res0 = coverage_uav_access(baseline, UAV_CENTER)
        assert res0.value == pytest.approx(0.9414972105560485, abs=1e-8)
        res170 = coverage_uav_access(baseline, Point3(170.0, 0.0, 100.0))
        assert res170.value == pytest.approx(0.5586507117841876, abs=1e-8)

    def test_access_prefers_hotspot_center(self, baseline):
        over_center = coverage_uav_access(baseline, UAV_CENTER).value
        off = coverage_uav_access(baseline, Point3(120.0, 0.0, 100.0)).value
        assert over_center > off

    def test_backhaul_closed_form(self, baseline):
        val = coverage_backhaul(baseline, UAV_CENTER)
        assert val == pytest.approx(0.8200851636294827, rel=1e-12)
        # LoS-probability-weighted mix of the two fixed-state CCDFs
        kappa = los_probability_backhaul(baseline.env, baseline.tbs, UAV_CENTER)
        d3 = math.sqrt(170.0 ** 2 + 90.0 ** 2)
        mix = 0.0
        for eta, w in ((baseline.link.eta_los, kappa),
                       (baseline.link.eta_nlos, 1.0 - kappa)):
            x = baseline.threshold.beta_bar_u * eta * d3 ** 2.7
            mix += w * float((1.0 + 2.0 * x) * math.exp(-2.0 * x))
        assert val == pytest.approx(mix, rel=1e-12)

    def test_backhaul_coincident_raises(self, baseline):
        with pytest.raises(ValueError):
            coverage_backhaul(baseline, baseline.tbs)

    def test_end_to_end_modes(self, baseline):
        access = coverage_uav_access(baseline, UAV_CENTER).value
        backhaul = coverage_backhaul(baseline, UAV_CENTER)
        assert coverage_end_to_end(baseline, UAV_CENTER, Tethered()) == \
            pytest.approx(access, rel=1e-12)
        assert coverage_end_to_end(baseline, UAV_CENTER, Untethered(1.0)) == \
            pytest.approx(access * backhaul, rel=1e-12)
        # duty cycle models availability, not link quality: e2e ignores it
        assert coverage_end_to_end(baseline, UAV_CENTER, Untethered(0.75)) == \
            pytest.approx(access * backhaul, rel=1e-12)


class TestAssociationBoundary:
    def test_boundary_formula(self, baseline):
        bnd = association_boundary(baseline)
        assert isinstance(bnd, AssociationBoundary)
        r_b = 170.0
        lam_ratio = (r_b ** 3.0 / baseline.link.eta_los) ** (1.0 / 2.7)
        assert float(bnd.lambda_los(r_b)) == pytest.approx(lam_ratio, rel=1e-12)
        assert float(bnd.lambda_los(r_b)) > float(bnd.lambda_nlos(r_b))

    def test_boundaries_monotone(self, baseline):
        bnd = association_boundary(baseline)
        r = np.linspace(10.0, 400.0, 40)
        assert np.all(np.diff(bnd.lambda_los(r)) > 0.0)
        assert np.all(np.diff(bnd.lambda_nlos(r)) > 0.0)

    @pytest.mark.parametrize("user, expected", [
        (Point2(0.0, 0.0), Association.UAV_ALWAYS),      # on top of the UAV
        (Point2(-150.0, 0.0), Association.UAV_IF_LOS),   # far from both
        (Point2(165.0, 0.0), Association.TBS_ALWAYS),    # at the TBS's feet
    ])
    def test_classify_user(self, baseline, user, expected):
        assert classify_user(baseline, UAV_CENTER, user) is expected


class TestSystemTethered:
    def test_value_and_breakdown(self, baseline):
        res = system_coverage_tuav(baseline, UAV_CENTER)
        assert res.value == pytest.approx(0.9559513365921473, abs=2e-6)
        assert res.breakdown["uav_los"] == pytest.approx(0.8627279397, abs=2e-6)
        assert res.breakdown["uav_nlos"] == pytest.approx(0.0, abs=1e-8)
        assert res.breakdown["tbs_los_region"] == pytest.approx(0.0797699508, abs=2e-6)
        assert res.breakdown["tbs_nlos_region"] == pytest.approx(0.0134534461, abs=2e-6)
        assert res.breakdown["unavailable"] == 0.0
        parts = sum(v for k, v in res.breakdown.items() if k != "unavailable")
        assert res.value == pytest.approx(parts, rel=1e-12)
        assert res.quad_error <= SYSTEM_TOL

    def test_beats_tbs_alone(self, baseline):
        assert system_coverage_tuav(baseline, UAV_CENTER).value > \
            coverage_tbs(baseline).value

    def test_mirror_symmetry(self, baseline):
        up = system_coverage_tuav(baseline, Point3(60.0, 40.0, 100.0))
        down = system_coverage_tuav(baseline, Point3(60.0, -40.0, 100.0))
        assert up.value == pytest.approx(down.value, abs=1e-9)

    def test_atom_path_continuity(self, baseline):
        """UAV exactly above the TBS switches to the degenerate-geometry
        branch; the value must join the generic branch continuously."""
        above = system_coverage_tuav(baseline, Point3(170.0, 0.0, 120.0))
        nearby = system_coverage_tuav(baseline, Point3(170.0 + 1e-5, 0.0, 120.0))
        assert above.value == pytest.approx(nearby.value, abs=1e-6)
        assert 0.0 < above.value < 1.0

    def test_tbs_at_hotspot_center(self, link_defaults, dense_urban, baseline):
        sc = Scenario(HotSpot(Point2(0.0, 0.0), 150.0), Point3(0.0, 0.0, 10.0),
                      dense_urban, link_defaults, baseline.threshold)
        res = system_coverage_tuav(sc, Point3(40.0, 0.0, 100.0))
        assert 0.0 < res.value < 1.0
        assert res.quad_error <= SYSTEM_TOL

    def test_budget_exhaustion_propagates(self, baseline):
        with pytest.raises(QuadratureError):
            system_coverage_tuav(baseline, UAV_CENTER, abs_tol=1e-14,
                                 max_evals=300)


class TestSystemUntethered:
    def test_zero_duty_is_tbs_only(self, baseline):
        res = system_coverage_uuav(baseline, UAV_CENTER, 0.0)
        assert res.value == pytest.approx(coverage_tbs(baseline).value, abs=1e-12)

    def test_affine_in_duty_cycle(self, baseline):
        p0 = system_coverage_uuav(baseline, UAV_CENTER, 0.0).value
        p1 = system_coverage_uuav(baseline, UAV_CENTER, 1.0).value
        for a in (0.25, 0.6, 0.9):
            pa = system_coverage_uuav(baseline, UAV_CENTER, a).value
            assert pa == pytest.approx((1.0 - a) * p0 + a * p1, abs=1e-9)

    def test_full_duty_recombines_tethered_parts(self, baseline):
        """At A=1 the unavailable term drops out and the UAV terms carry the
        backhaul factor; both ingredients are separately computable."""
        t = system_coverage_tuav(baseline, UAV_CENTER).breakdown
        p_bu = coverage_backhaul(baseline, UAV_CENTER)
        expected = (p_bu * (t["uav_los"] + t["uav_nlos"])
                    + t["tbs_los_region"] + t["tbs_nlos_region"])
        res = system_coverage_uuav(baseline, UAV_CENTER, 1.0)
        assert res.value == pytest.approx(expected, abs=1e-9)

    def test_frozen_value(self, baseline):
        res = system_coverage_uuav(baseline, UAV_CENTER, 0.75)
        assert res.value == pytest.approx(0.7173665217704899, abs=2e-6)

    def test_duty_cycle_validated(self):
        with pytest.raises(ValueError):
            Untethered(1.5)
        with pytest.raises(ValueError):
            Untethered(-0.1)


class TestAssociationProbability:
    def test_tethered_value(self, baseline):
        p = association_probability(baseline, UAV_CENTER, Tethered())
        assert p == pytest.approx(0.8857837521150289, abs=2e-6)

    def test_untethered_scales_with_duty(self, baseline):
        p_t = association_probability(baseline, UAV_CENTER, Tethered())
        for a in (0.0, 0.3, 1.0):
            p_u = association_probability(baseline, UAV_CENTER, Untethered(a))
            assert p_u == pytest.approx(a * p_t, abs=1e-9)

    def test_moves_with_the_uav(self, baseline):
        # parking the UAV at the far edge cedes users to the TBS
        near = association_probability(baseline, UAV_CENTER, Tethered())
        far = association_probability(baseline, Point3(-140.0, 0.0, 100.0),
                                      Tethered())
        assert near > far


class TestScenarioValidation:
    def test_off_axis_rejected(self, link_defaults, dense_urban, baseline):
        with pytest.raises(ValueError):
            Scenario(HotSpot(Point2(0.0, 0.0), 150.0), Point3(170.0, 5.0, 10.0),
                     dense_urban, link_defaults, baseline.threshold)
        with pytest.raises(ValueError):
            Scenario(HotSpot(Point2(0.0, 3.0), 150.0), Point3(170.0, 0.0, 10.0),
                     dense_urban, link_defaults, baseline.threshold)

    def test_ground_tbs_rejected(self, link_defaults, dense_urban, baseline):
        with pytest.raises(ValueError):
            Scenario(HotSpot(Point2(0.0, 0.0), 150.0), Point3(170.0, 0.0, 0.0),
                     dense_urban, link_defaults, baseline.threshold)

    def test_d_bo_property(self, baseline):
        assert baseline.d_bo == 170.0

    def test_result_type(self, baseline):
        res = coverage_tbs(baseline)
        assert isinstance(res, CoverageResult)
        assert set(res.breakdown) == {"tbs"}

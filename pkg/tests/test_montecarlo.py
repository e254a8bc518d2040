import math

import numpy as np
import pytest

from uavcov.coverage import (
    Tethered,
    Untethered,
    association_probability,
    coverage_backhaul,
    coverage_tbs,
    coverage_uav_access,
    system_coverage_tuav,
    system_coverage_uuav,
)
from uavcov.distributions import (
    HotSpot,
    conditional_distance_cdf,
    conditional_geometry,
    marginal_distance_cdf,
)
from uavcov.geometry import Point2, Point3
from uavcov.montecarlo import (
    AccessLink,
    BackhaulLink,
    GaussianCluster,
    McConfig,
    McEstimate,
    TbsLink,
    UniformDisk,
    estimate_association_probability,
    estimate_conditional_pdf,
    estimate_distance_pdf,
    estimate_link_coverage,
    estimate_system_coverage,
    sample_user,
)

UAV = Point3(0.0, 0.0, 100.0)


def hist_masses(hist):
    return hist.density * np.diff(hist.edges)


class TestConfig:
    def test_validation(self):
        with pytest.raises(ValueError):
            McConfig(n_samples=0, seed=1)
        with pytest.raises(ValueError):
            McConfig(n_samples=10, seed=1, batch_size=0)

    def test_margin(self):
        est = McEstimate(mean=0.5, std_error=0.01, n=100)
        assert est.margin() == pytest.approx(0.04)       # 4 sigma by default
        assert est.margin(z=1.96) == pytest.approx(0.0196)

    def test_cluster_validation(self):
        with pytest.raises(ValueError):
            GaussianCluster(std=0.0)


class TestSampling:
    def test_uniform_disk_stays_inside(self, baseline):
        rng = np.random.default_rng(0)
        x, y = sample_user(rng, baseline.hotspot, UniformDisk(), 50_000)
        assert np.all(np.hypot(x, y) <= 150.0 + 1e-9)
        # uniformity: mean squared radius of a uniform disk is R^2/2
        assert float(np.mean(x ** 2 + y ** 2)) == pytest.approx(
            150.0 ** 2 / 2.0, rel=0.02)

    def test_gaussian_cluster_stays_inside(self, baseline):
        rng = np.random.default_rng(1)
        x, y = sample_user(rng, baseline.hotspot, GaussianCluster(std=50.0),
                           20_000)
        r = np.hypot(x, y)
        assert np.all(r <= 150.0 + 1e-9)
        # clustering: far more mass near the center than uniform would give
        assert float(np.mean(r < 50.0)) > 0.3

    def test_determinism(self, baseline):
        a = sample_user(np.random.default_rng(7), baseline.hotspot,
                        UniformDisk(), 100)
        b = sample_user(np.random.default_rng(7), baseline.hotspot,
                        UniformDisk(), 100)
        np.testing.assert_array_equal(a[0], b[0])
        np.testing.assert_array_equal(a[1], b[1])


class TestDistanceHistograms:
    def test_marginal_histogram_matches_cdf(self, baseline):
        cfg = McConfig(n_samples=400_000, seed=3)
        anchor = Point2(170.0, 0.0)
        hist = estimate_distance_pdf(cfg, baseline.hotspot, anchor, bins=40)
        model = np.diff(marginal_distance_cdf(baseline.hotspot, anchor,
                                              hist.edges))
        l1 = float(np.abs(hist_masses(hist) - model).sum())
        assert l1 < 0.02
        assert hist_masses(hist).sum() == pytest.approx(1.0, abs=1e-12)

    def test_conditional_histogram_matches_cdf(self, baseline):
        cfg = McConfig(n_samples=6_000_000, seed=4)
        tbs, uav = Point2(170.0, 0.0), Point2(60.0, 40.0)
        hist = estimate_conditional_pdf(cfg, baseline.hotspot, tbs, uav,
                                        r_b=120.0, band=0.5, bins=30,
                                        min_survivors=20_000)
        assert hist.n >= 20_000
        geom = conditional_geometry(baseline.hotspot, tbs, uav, 120.0)
        model = np.diff(conditional_distance_cdf(geom, hist.edges))
        l1 = float(np.abs(hist_masses(hist) - model).sum())
        assert l1 < 0.06

    def test_conditional_band_too_far_out(self, baseline):
        cfg = McConfig(n_samples=10_000, seed=5)
        with pytest.raises(RuntimeError):
            estimate_conditional_pdf(cfg, baseline.hotspot, Point2(900.0, 0.0),
                                     Point2(0.0, 0.0), r_b=100.0, band=0.5)


class TestLinkEstimators:
    @pytest.mark.parametrize("kind, analytic", [
        ("tbs", lambda sc: coverage_tbs(sc).value),
        ("access", lambda sc: coverage_uav_access(sc, UAV).value),
        ("backhaul", lambda sc: coverage_backhaul(sc, UAV)),
    ])
    def test_matches_analytic(self, baseline, kind, analytic):
        link = {"tbs": TbsLink(), "access": AccessLink(UAV),
                "backhaul": BackhaulLink(UAV)}[kind]
        cfg = McConfig(n_samples=200_000, seed=11)
        est = estimate_link_coverage(cfg, baseline, link)
        tol = max(0.005, est.margin())
        assert est.mean == pytest.approx(analytic(baseline), abs=tol)

    def test_same_seed_reproduces(self, baseline):
        cfg = McConfig(n_samples=50_000, seed=42)
        a = estimate_link_coverage(cfg, baseline, TbsLink())
        b = estimate_link_coverage(cfg, baseline, TbsLink())
        assert a == b

    def test_seed_changes_estimate(self, baseline):
        a = estimate_link_coverage(McConfig(50_000, seed=1), baseline, TbsLink())
        b = estimate_link_coverage(McConfig(50_000, seed=2), baseline, TbsLink())
        assert a.mean != b.mean


class TestSystemEstimators:
    def test_tethered_agrees(self, baseline):
        cfg = McConfig(n_samples=300_000, seed=21)
        est = estimate_system_coverage(cfg, baseline, UAV, Tethered())
        analytic = system_coverage_tuav(baseline, UAV).value
        assert est.mean == pytest.approx(analytic, abs=max(0.005, est.margin()))

    def test_untethered_agrees(self, baseline):
        cfg = McConfig(n_samples=300_000, seed=22)
        est = estimate_system_coverage(cfg, baseline, UAV, Untethered(0.6))
        analytic = system_coverage_uuav(baseline, UAV, 0.6).value
        assert est.mean == pytest.approx(analytic, abs=max(0.005, est.margin()))

    def test_association_agrees(self, baseline):
        cfg = McConfig(n_samples=300_000, seed=23)
        est = estimate_association_probability(cfg, baseline, UAV, Tethered())
        analytic = association_probability(baseline, UAV, Tethered())
        assert est.mean == pytest.approx(analytic, abs=max(0.005, est.margin()))

    def test_std_error_scales(self, baseline):
        small = estimate_system_coverage(McConfig(20_000, seed=9), baseline,
                                         UAV, Tethered())
        large = estimate_system_coverage(McConfig(320_000, seed=9), baseline,
                                         UAV, Tethered())
        # 16x the samples should shrink the standard error about 4x
        assert large.std_error < small.std_error / 2.5
        assert small.std_error < 4.5 * large.std_error

"""Pure-numpy vs. compiled-kernel agreement.

Both backends implement the exact same panel construction and refinement
order, so results must agree to rounding, not merely to quadrature
tolerance.  Skipped wholesale when the extension is not built.
"""

import math

import numpy as np
import pytest

from uavcov._core import BACKEND_NAME, get_backend

_kernels = pytest.importorskip("uavcov._core._kernels")
_pure = get_backend("pure")

TABLE_ARGS = dict(
    mu=1.0, m=2,
    beta_b=1.1914923520864221e-07, beta_u=1.1914923520864221e-07,
    alpha_b=3.0, alpha_u=2.7,
    eta_l=10.0 ** 0.16, eta_n=10.0 ** 2.3,
    a_r=13.0, b_r=0.22, power_ratio=1.0,
)


def random_scenario(rng):
    return dict(
        R_o=rng.uniform(80.0, 220.0),
        d_bo=rng.uniform(0.0, 400.0),
        d_bu=rng.uniform(1.0, 350.0),
        chi=rng.uniform(-math.pi, math.pi),
        h_b=rng.uniform(5.0, 30.0),
        h_u=rng.uniform(40.0, 250.0),
        mu=1.0,
        m=int(rng.integers(1, 4)),
        beta_b=10.0 ** rng.uniform(-8.0, -6.0),
        beta_u=10.0 ** rng.uniform(-8.0, -6.0),
        alpha_b=rng.uniform(2.5, 3.5),
        alpha_u=rng.uniform(2.2, 3.0),
        eta_l=rng.uniform(1.1, 3.0),
        eta_n=rng.uniform(50.0, 300.0),
        a_r=rng.uniform(5.0, 25.0),
        b_r=rng.uniform(0.1, 0.3),
        power_ratio=10.0 ** rng.uniform(-0.5, 0.5),
    )


class TestSelection:
    def test_backend_is_compiled_by_default(self):
        # the extension imported above, so auto-selection must pick it
        # unless the environment forced the fallback
        assert BACKEND_NAME in ("pure", "compiled")

    def test_get_backend_roundtrip(self):
        assert get_backend("pure") is not None
        assert get_backend("compiled") is _kernels
        assert get_backend(None).system_coverage is not None

    def test_unknown_backend_rejected(self):
        with pytest.raises(ValueError):
            get_backend("fortran")


class TestLinkParity:
    def test_tbs_link(self):
        for d in (0.0, 60.0, 150.0, 170.0, 320.0):
            v_p, e_p = _pure.link_coverage_tbs(150.0, d, 10.0, 1.0,
                                               TABLE_ARGS["beta_b"], 3.0)
            v_c, e_c = _kernels.link_coverage_tbs(150.0, d, 10.0, 1.0,
                                                  TABLE_ARGS["beta_b"], 3.0)
            assert v_c == pytest.approx(v_p, abs=1e-12)
            assert e_c == pytest.approx(e_p, abs=1e-12)

    def test_uav_link(self):
        a = TABLE_ARGS
        for d in (0.0, 100.0, 170.0, 250.0):
            out_p = _pure.link_coverage_uav(150.0, d, 100.0, a["m"], a["beta_u"],
                                            a["alpha_u"], a["eta_l"], a["eta_n"],
                                            a["a_r"], a["b_r"])
            out_c = _kernels.link_coverage_uav(150.0, d, 100.0, a["m"], a["beta_u"],
                                               a["alpha_u"], a["eta_l"], a["eta_n"],
                                               a["a_r"], a["b_r"])
            np.testing.assert_allclose(out_c, out_p, atol=1e-12)


class TestSystemParity:
    def test_reference_geometry(self):
        a = TABLE_ARGS
        out_p = _pure.system_coverage(150.0, 170.0, 170.0, 0.0, 10.0, 100.0,
                                      a["mu"], a["m"], a["beta_b"], a["beta_u"],
                                      a["alpha_b"], a["alpha_u"], a["eta_l"],
                                      a["eta_n"], a["a_r"], a["b_r"],
                                      a["power_ratio"])
        out_c = _kernels.system_coverage(150.0, 170.0, 170.0, 0.0, 10.0, 100.0,
                                         a["mu"], a["m"], a["beta_b"], a["beta_u"],
                                         a["alpha_b"], a["alpha_u"], a["eta_l"],
                                         a["eta_n"], a["a_r"], a["b_r"],
                                         a["power_ratio"])
        np.testing.assert_allclose(out_c, out_p, atol=1e-11)

    @pytest.mark.parametrize("seed", range(12))
    def test_random_scenarios(self, seed):
        kw = random_scenario(np.random.default_rng(seed))
        out_p = _pure.system_coverage(**kw)
        out_c = _kernels.system_coverage(**kw)
        np.testing.assert_allclose(out_c, out_p, atol=1e-9,
                                   err_msg=f"scenario {kw}")

    @pytest.mark.parametrize("seed", range(4))
    def test_association_mass(self, seed):
        kw = random_scenario(np.random.default_rng(100 + seed))
        out_p = _pure.system_coverage(**kw, assoc_only=True)
        out_c = _kernels.system_coverage(**kw, assoc_only=True)
        np.testing.assert_allclose(out_c, out_p, atol=1e-9)
        assert sum(out_c[:4]) == pytest.approx(1.0, abs=1e-4)

    def test_coincident_projection_rejected(self):
        kw = random_scenario(np.random.default_rng(5))
        kw["d_bu"] = 0.0
        with pytest.raises(ValueError):
            _pure.system_coverage(**kw)
        with pytest.raises(ValueError):
            _kernels.system_coverage(**kw)

    def test_budget_error_parity(self):
        a = TABLE_ARGS
        args = (150.0, 170.0, 170.0, 0.0, 10.0, 100.0, a["mu"], a["m"],
                a["beta_b"], a["beta_u"], a["alpha_b"], a["alpha_u"],
                a["eta_l"], a["eta_n"], a["a_r"], a["b_r"], a["power_ratio"])
        from uavcov.quadrature import QuadratureError
        for mod in (_pure, _kernels):
            with pytest.raises(QuadratureError):
                mod.system_coverage(*args, abs_tol=1e-15, max_evals=200)

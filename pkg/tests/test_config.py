"""Config loading: defaults, merging, unit conversion, and hashing."""

import json
import math

import pytest

from uavcov.channel import DENSE_URBAN, HIGH_RISE
from uavcov.config import (
    ConfigError,
    RunConfig,
    build_config,
    config_hash,
    default_config,
    load_config,
)
from uavcov.coverage import Tethered, Untethered
from uavcov.geometry import Point2, Point3


class TestDefaults:
    """The shipped defaults reproduce the baseline deployment in model units."""

    def test_link_conversions(self):
        link = build_config().scenario.link
        assert link.rho_b == pytest.approx(1.2589254117941673)  # 1 dBm
        assert link.rho_u == link.rho_b
        assert link.sigma_n2 == pytest.approx(1e-8)  # -80 dBm
        assert link.alpha_b == 3.0
        assert link.alpha_u == 2.7
        assert link.eta_los == pytest.approx(10 ** 0.16)
        assert link.eta_nlos == pytest.approx(10 ** 2.3)
        assert link.m == 2

    def test_threshold(self):
        thr = build_config().scenario.threshold
        assert thr.beta == pytest.approx(15.0, rel=1e-12)
        assert thr.beta_bar_b == pytest.approx(1.1914923520864221e-07, rel=1e-12)
        assert thr.beta_bar_u == thr.beta_bar_b

    def test_geometry_and_mode(self):
        cfg = build_config()
        assert cfg.scenario.hotspot.center == Point2(0.0, 0.0)
        assert cfg.scenario.hotspot.radius == 150.0
        assert cfg.scenario.tbs == Point3(170.0, 0.0, 10.0)
        assert cfg.scenario.env == DENSE_URBAN
        assert cfg.tether.tether_len == 50.0
        assert cfg.tether.min_inclination == pytest.approx(math.radians(30.0))
        assert cfg.mode == Tethered()
        assert cfg.uav == Point3(0.0, 0.0, 100.0)
        assert cfg.ground_station.rooftop == Point3(0.0, 75.0, 20.0)


class TestHashing:
    def test_twelve_hex_digits(self):
        h = config_hash(default_config())
        assert len(h) == 12
        int(h, 16)  # parses as hex

    def test_deterministic_and_key_order_free(self):
        assert config_hash({"a": 1, "b": [2, 3]}) == config_hash({"b": [2, 3], "a": 1})
        assert config_hash(default_config()) == config_hash(default_config())

    def test_sensitive_to_values(self):
        base = default_config()
        changed = build_config({"hotspot": {"radius": 151.0}}).raw
        assert config_hash(base) != config_hash(changed)

    def test_property_matches_function(self):
        cfg = build_config()
        assert cfg.config_hash == config_hash(cfg.raw)


class TestMerging:
    def test_unknown_top_level_key(self):
        with pytest.raises(ConfigError, match="unknown config key: hotspott"):
            build_config({"hotspott": {}})

    def test_unknown_nested_key(self):
        with pytest.raises(ConfigError, match="link.snr_db"):
            build_config({"link": {"snr_db": 3.0}})

    def test_scalar_for_section(self):
        with pytest.raises(ConfigError, match="must be an object"):
            build_config({"link": 7})

    def test_partial_override_keeps_siblings(self):
        cfg = build_config({"link": {"pathloss_exp_uav": 2.5}})
        assert cfg.scenario.link.alpha_u == 2.5
        assert cfg.scenario.link.alpha_b == 3.0  # untouched


class TestEnvironment:
    def test_preset_selection(self):
        cfg = build_config({"environment": "high_rise"})
        assert cfg.scenario.env == HIGH_RISE

    def test_unknown_preset(self):
        with pytest.raises(ConfigError, match="unknown environment"):
            build_config({"environment": "suburbia"})

    def test_overrides(self):
        cfg = build_config({"environment_overrides": {"gamma1": 35.0}})
        assert cfg.scenario.env.gamma1 == 35.0
        assert cfg.scenario.env.gamma3 == DENSE_URBAN.gamma3

    def test_override_unknown_field(self):
        with pytest.raises(ConfigError, match="environment_overrides"):
            build_config({"environment_overrides": {"gamma9": 1.0}})

    def test_overrides_none_means_empty(self):
        assert build_config({"environment_overrides": None}).scenario.env == DENSE_URBAN


class TestModes:
    def test_untethered(self):
        cfg = build_config({"uav": {"mode": "untethered", "duty_cycle": 0.6}})
        assert cfg.mode == Untethered(0.6)

    def test_unknown_mode(self):
        with pytest.raises(ConfigError, match="uav.mode"):
            build_config({"uav": {"mode": "balloon"}})

    @pytest.mark.parametrize("duty", [-0.1, 1.5])
    def test_duty_cycle_range(self, duty):
        with pytest.raises(ConfigError, match="duty cycle"):
            build_config({"uav": {"mode": "untethered", "duty_cycle": duty}})


class TestValidation:
    def test_nakagami_m_must_be_int(self):
        with pytest.raises(ConfigError, match="nakagami_m"):
            build_config({"link": {"nakagami_m": 2.0}})

    def test_nakagami_m_rejects_bool(self):
        # bool is an int subclass; still not a fading parameter
        with pytest.raises(ConfigError, match="nakagami_m"):
            build_config({"link": {"nakagami_m": True}})

    def test_model_errors_become_config_errors(self):
        with pytest.raises(ConfigError, match="radius"):
            build_config({"hotspot": {"radius": -5.0}})

    @pytest.mark.parametrize("tbs", [[170.0, 0.0], "170,0,10"])
    def test_point_shape(self, tbs):
        with pytest.raises(ConfigError, match=r"\[x, y, h\]"):
            build_config({"tbs": tbs})

    def test_ground_station_optional(self):
        assert build_config({"ground_station": None}).ground_station is None
        cfg = build_config({"ground_station": {"position": None}})
        assert cfg.ground_station is None


class TestLoadConfig:
    def test_none_gives_defaults(self):
        cfg = load_config(None)
        assert isinstance(cfg, RunConfig)
        assert cfg.raw == default_config()

    def test_file_round_trip(self, tmp_path):
        path = tmp_path / "run.json"
        path.write_text(json.dumps({"hotspot": {"radius": 120.0}}))
        cfg = load_config(path)
        assert cfg.scenario.hotspot.radius == 120.0

    def test_bad_json(self, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text("{not json")
        with pytest.raises(ConfigError, match="not valid JSON"):
            load_config(path)

    def test_top_level_must_be_object(self, tmp_path):
        path = tmp_path / "list.json"
        path.write_text("[1, 2, 3]")
        with pytest.raises(ConfigError, match="must be a JSON object"):
            load_config(path)

"""Run configuration: JSON in human units, model objects out.

Config files carry powers in dBm, losses and thresholds in dB and angles in
degrees; loading converts everything to the linear/radian quantities the
model works with.  Unknown keys are rejected so typos fail loudly, and the
merged dictionary is content-hashed so outputs can be traced back to their
inputs.
"""

from __future__ import annotations

import dataclasses
import hashlib
import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Any

from .channel import (
    ENVIRONMENT_PRESETS,
    EnvironmentParams,
    LinkParams,
    SnrThreshold,
    db_to_linear,
    dbm_to_mw,
)
from .coverage import Scenario, Tethered, Untethered, UavMode
from .deployment import GroundStation, TetherConfig
from .distributions import HotSpot
from .geometry import Point2, Point3

SCHEMA_VERSION = 1


class ConfigError(ValueError):
    """A config file that parses but does not describe a valid run."""


def default_config() -> dict[str, Any]:
    """Baseline deployment: dense-urban hot-spot of radius 150 m with the
    terrestrial station 170 m from its center."""
    return {
        "environment": "dense_urban",
        "environment_overrides": {},
        "hotspot": {"center": [0.0, 0.0], "radius": 150.0},
        "tbs": [170.0, 0.0, 10.0],
        "link": {
            "tx_power_tbs_dbm": 1.0,
            "tx_power_uav_dbm": 1.0,
            "noise_power_dbm": -80.0,
            "snr_threshold_db": 10.0 * math.log10(15.0),
            "pathloss_exp_tbs": 3.0,
            "pathloss_exp_uav": 2.7,
            "excess_loss_los_db": 1.6,
            "excess_loss_nlos_db": 23.0,
            "nakagami_m": 2,
        },
        "tether": {"length": 50.0, "min_inclination_deg": 30.0},
        "uav": {"mode": "tethered", "duty_cycle": 1.0, "position": [0.0, 0.0, 100.0]},
        "ground_station": {"position": [0.0, 75.0, 20.0]},
        "map": {"x": [-150.0, 175.0, 25.0], "h": [20.0, 220.0, 20.0]},
        "sweep": {"x": [-100.0, 175.0, 5.0], "height": 100.0},
        "association": {"grid_step": 10.0, "n_users": 200},
        "optimize": {"x_step": 8.0, "h_step": 2.0, "h_range": [10.0, 300.0]},
    }


@dataclass(frozen=True)
class RunConfig:
    """Everything a CLI command needs, plus the merged raw dict for hashing."""

    scenario: Scenario
    tether: TetherConfig
    mode: UavMode
    uav: Point3
    ground_station: GroundStation | None
    raw: dict[str, Any]

    @property
    def config_hash(self) -> str:
        return config_hash(self.raw)


def config_hash(raw: dict[str, Any]) -> str:
    """First 12 hex digits of the SHA-256 of the canonical JSON form."""
    canonical = json.dumps(raw, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode()).hexdigest()[:12]


def _merge(base: dict, override: dict, path: str = "") -> dict:
    out = dict(base)
    for key, value in override.items():
        here = f"{path}.{key}" if path else key
        if key not in base:
            raise ConfigError(f"unknown config key: {here}")
        # an empty default section is free-form (validated downstream), not a schema
        if isinstance(base[key], dict) and base[key] and value is not None:
            if not isinstance(value, dict):
                raise ConfigError(f"{here} must be an object")
            out[key] = _merge(base[key], value, here)
        else:
            out[key] = value
    return out


def _point2(value, name: str) -> Point2:
    if not (isinstance(value, (list, tuple)) and len(value) == 2):
        raise ConfigError(f"{name} must be [x, y]")
    return Point2(float(value[0]), float(value[1]))


def _point3(value, name: str) -> Point3:
    if not (isinstance(value, (list, tuple)) and len(value) == 3):
        raise ConfigError(f"{name} must be [x, y, h]")
    return Point3(float(value[0]), float(value[1]), float(value[2]))


def _environment(raw: dict) -> EnvironmentParams:
    name = raw["environment"]
    if name not in ENVIRONMENT_PRESETS:
        raise ConfigError(f"unknown environment {name!r}; "
                          f"choose from {sorted(ENVIRONMENT_PRESETS)}")
    env = ENVIRONMENT_PRESETS[name]
    overrides = raw["environment_overrides"] or {}
    fields = {f.name for f in dataclasses.fields(EnvironmentParams)}
    bad = set(overrides) - fields
    if bad:
        raise ConfigError(f"unknown environment_overrides keys: {sorted(bad)}")
    if overrides:
        env = dataclasses.replace(env, **{k: float(v) for k, v in overrides.items()})
    return env


def build_config(user: dict[str, Any] | None = None) -> RunConfig:
    """Merge a user dict over the defaults and build the model objects."""
    raw = _merge(default_config(), user or {})

    lk = raw["link"]
    m = lk["nakagami_m"]
    if not (isinstance(m, int) and not isinstance(m, bool)):
        raise ConfigError("link.nakagami_m must be an integer")
    try:
        link = LinkParams(
            rho_b=dbm_to_mw(float(lk["tx_power_tbs_dbm"])),
            rho_u=dbm_to_mw(float(lk["tx_power_uav_dbm"])),
            sigma_n2=dbm_to_mw(float(lk["noise_power_dbm"])),
            alpha_b=float(lk["pathloss_exp_tbs"]),
            alpha_u=float(lk["pathloss_exp_uav"]),
            eta_los=db_to_linear(float(lk["excess_loss_los_db"])),
            eta_nlos=db_to_linear(float(lk["excess_loss_nlos_db"])),
            m=m,
        )
        threshold = SnrThreshold.from_link(
            db_to_linear(float(lk["snr_threshold_db"])), link)
        scenario = Scenario(
            hotspot=HotSpot(_point2(raw["hotspot"]["center"], "hotspot.center"),
                            float(raw["hotspot"]["radius"])),
            tbs=_point3(raw["tbs"], "tbs"),
            env=_environment(raw),
            link=link,
            threshold=threshold,
        )
        tether = TetherConfig(
            tether_len=float(raw["tether"]["length"]),
            min_inclination=math.radians(float(raw["tether"]["min_inclination_deg"])),
        )
        mode_name = raw["uav"]["mode"]
        if mode_name == "tethered":
            mode: UavMode = Tethered()
        elif mode_name == "untethered":
            mode = Untethered(float(raw["uav"]["duty_cycle"]))
        else:
            raise ConfigError(f"uav.mode must be 'tethered' or 'untethered', "
                              f"got {mode_name!r}")
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc

    gs_raw = raw["ground_station"]
    gs = None
    if gs_raw is not None and gs_raw.get("position") is not None:
        gs = GroundStation(_point3(gs_raw["position"], "ground_station.position"))

    return RunConfig(
        scenario=scenario,
        tether=tether,
        mode=mode,
        uav=_point3(raw["uav"]["position"], "uav.position"),
        ground_station=gs,
        raw=raw,
    )


def load_config(path: str | Path | None) -> RunConfig:
    """Build a RunConfig from a JSON file (or the defaults when path is None)."""
    if path is None:
        return build_config()
    text = Path(path).read_text()
    try:
        user = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: not valid JSON ({exc})") from exc
    if not isinstance(user, dict):
        raise ConfigError(f"{path}: top level must be a JSON object")
    return build_config(user)

"""Command-line front end.

Every subcommand takes the same four options: ``--config`` (JSON, merged
over the defaults), ``--seed``, ``--out`` (``-`` for stdout) and
``--format`` (json or csv).  CSV files start with ``#``-prefixed metadata
lines carrying the command, schema version, config hash and seed, so a
result file is always traceable to the run that made it.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from contextlib import contextmanager

import numpy as np

from .config import SCHEMA_VERSION, ConfigError, RunConfig, default_config, load_config
from .coverage import (
    Untethered,
    classify_user,
    coverage_end_to_end,
    coverage_uav_access,
    system_coverage_tuav,
    system_coverage_uuav,
)
from .deployment import anneal_tuav, grid_search_uuav
from .geometry import Point2, Point3
from .montecarlo import sample_user
from .validation import run_validation

BREAKDOWN_KEYS = ("uav_los", "uav_nlos", "tbs_los_region", "tbs_nlos_region",
                  "unavailable")


@contextmanager
def _open_out(path: str):
    if path == "-":
        yield sys.stdout
    else:
        with open(path, "w", newline="") as fh:
            yield fh


def _meta(command: str, cfg: RunConfig, seed: int) -> dict:
    return {
        "command": command,
        "schema_version": SCHEMA_VERSION,
        "config_hash": cfg.config_hash,
        "seed": seed,
    }


def _emit(args, cfg: RunConfig, header: list[str], rows: list[list],
          payload_key: str) -> None:
    meta = _meta(args.command, cfg, args.seed)
    with _open_out(args.out) as fh:
        if args.format == "csv":
            for key, value in meta.items():
                fh.write(f"# {key}: {value}\n")
            writer = csv.writer(fh)
            writer.writerow(header)
            writer.writerows(rows)
        else:
            payload = dict(meta)
            payload[payload_key] = [dict(zip(header, row)) for row in rows]
            json.dump(payload, fh, indent=2)
            fh.write("\n")


def _mode_value(cfg: RunConfig, uav: Point3):
    if isinstance(cfg.mode, Untethered):
        return system_coverage_uuav(cfg.scenario, uav, cfg.mode.duty_cycle)
    return system_coverage_tuav(cfg.scenario, uav)


def _cmd_validate(args, cfg: RunConfig) -> int:
    checks = run_validation(cfg, seed=args.seed)
    header = ["check", "status", "value", "reference", "tolerance", "detail"]
    rows = [[c.name, "pass" if c.passed else "FAIL", f"{c.value:.9g}",
             f"{c.reference:.9g}", f"{c.tolerance:.3g}", c.detail]
            for c in checks]
    _emit(args, cfg, header, rows, "checks")
    return 0 if all(c.passed for c in checks) else 1


def _axis(spec, name: str) -> np.ndarray:
    try:
        lo, hi, step = (float(v) for v in spec)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{name} must be [lo, hi, step]") from exc
    if step <= 0.0 or hi < lo:
        raise ConfigError(f"{name}: need lo <= hi and step > 0")
    return np.arange(lo, hi + 1e-9, step)


def _cmd_coverage_map(args, cfg: RunConfig) -> int:
    spec = cfg.raw["map"] or default_config()["map"]
    header = ["x", "h", "value", *BREAKDOWN_KEYS, "quad_error"]
    rows = []
    for x in _axis(spec["x"], "map.x"):
        for h in _axis(spec["h"], "map.h"):
            try:
                res = _mode_value(cfg, Point3(float(x), 0.0, float(h)))
            except ValueError:
                continue  # placement coincides with the TBS antenna
            rows.append([float(x), float(h), res.value,
                         *(res.breakdown[k] for k in BREAKDOWN_KEYS),
                         res.quad_error])
    _emit(args, cfg, header, rows, "map")
    return 0


def _cmd_optimize(args, cfg: RunConfig) -> int:
    if isinstance(cfg.mode, Untethered):
        spec = cfg.raw["optimize"] or default_config()["optimize"]
        lo, hi = (float(v) for v in spec["h_range"])
        result = grid_search_uuav(cfg.scenario, cfg.mode.duty_cycle,
                                  x_step=float(spec["x_step"]),
                                  h_step=float(spec["h_step"]),
                                  h_range=(lo, hi))
        mode_name = "untethered"
    else:
        if cfg.ground_station is None:
            raise ConfigError("optimize with uav.mode=tethered needs ground_station")
        result = anneal_tuav(cfg.scenario, cfg.ground_station, cfg.tether,
                             seed=args.seed)
        mode_name = "tethered"
    pos = result.position
    header = ["mode", "x", "y", "h", "value", "evaluations"]
    rows = [[mode_name, pos.x, pos.y, pos.h, result.value, result.evaluations]]
    _emit(args, cfg, header, rows, "optimum")
    return 0


def _cmd_sweep(args, cfg: RunConfig) -> int:
    spec = cfg.raw["sweep"] or default_config()["sweep"]
    height = float(spec["height"])
    header = ["x", "h", "access", "end_to_end", "system"]
    rows = []
    for x in _axis(spec["x"], "sweep.x"):
        uav = Point3(float(x), 0.0, height)
        try:
            system = _mode_value(cfg, uav).value
            e2e = coverage_end_to_end(cfg.scenario, uav, cfg.mode)
        except ValueError:
            continue
        access = coverage_uav_access(cfg.scenario, uav).value
        rows.append([float(x), height, access, e2e, system])
    _emit(args, cfg, header, rows, "sweep")
    return 0


def _cmd_association_map(args, cfg: RunConfig) -> int:
    spec = cfg.raw["association"] or default_config()["association"]
    step = float(spec["grid_step"])
    n_users = int(spec["n_users"])
    if step <= 0.0 or n_users < 0:
        raise ConfigError("association: need grid_step > 0 and n_users >= 0")
    scn, uav = cfg.scenario, cfg.uav
    center, radius = scn.hotspot.center, scn.hotspot.radius
    header = ["kind", "x", "y", "serving"]
    rows = []
    for x in np.arange(center.x - radius, center.x + radius + 1e-9, step):
        for y in np.arange(center.y - radius, center.y + radius + 1e-9, step):
            if (x - center.x) ** 2 + (y - center.y) ** 2 > radius * radius:
                continue
            serving = classify_user(scn, uav, Point2(float(x), float(y)))
            rows.append(["region", float(x), float(y), serving.value])
    rng = np.random.default_rng(args.seed)
    for _ in range(n_users):
        user = sample_user(rng, scn.hotspot)
        serving = classify_user(scn, uav, user)
        rows.append(["user", user.x, user.y, serving.value])
    _emit(args, cfg, header, rows, "points")
    return 0


_COMMANDS = {
    "validate": (_cmd_validate, "json", "run the analytic-vs-simulation self checks"),
    "coverage-map": (_cmd_coverage_map, "csv", "coverage over a grid of placements"),
    "optimize": (_cmd_optimize, "json", "best placement for the configured mode"),
    "sweep": (_cmd_sweep, "csv", "coverage along a line of placements"),
    "association-map": (_cmd_association_map, "csv",
                        "who serves each point of the hot-spot"),
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="uavcov",
        description="Coverage analysis and placement for tethered/untethered "
                    "aerial base stations over a circular hot-spot.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_, default_format, help_text) in _COMMANDS.items():
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", default=None,
                       help="JSON config merged over the built-in defaults")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--out", default="-", help="output path ('-' = stdout)")
        p.add_argument("--format", choices=("json", "csv"), default=default_format)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config)
        return _COMMANDS[args.command][0](args, cfg)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

"""Command-line front end.

Each subcommand reproduces one dataset. Settings come from built-in
per-experiment defaults, then an optional JSON config file (flat keys named
like the flags, without leading dashes), then command-line flags.

Exit codes: 0 ok, 2 configuration error, 3 I/O error, 4 solver error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from . import experiments
from .errors import ParameterError, SolverError
from .experiments import SweepResult
from .model import (
    PowerGrid,
    ThreeLevelParams,
    TimeGrid,
    TwoLevelParams,
    threshold_power,
    validate,
)

EXIT_OK, EXIT_CONFIG, EXIT_IO, EXIT_SOLVER = 0, 2, 3, 4

FLOAT_KEYS = ("gamma", "beta", "gamma-star", "xi", "p", "p-min", "p-max", "g2", "gamma-xx", "t-max")
INT_KEYS = ("points", "steps", "workers")
OUTPUT_KEYS = ("out", "format")

GRID_DEFAULTS = {"p-min": 1e-2, "p-max": 1e4, "points": 121}

EXPERIMENTS = {
    "transient": {
        "keys": ("gamma", "beta", "gamma-star", "xi", "p", "t-max", "steps"),
        "defaults": {"gamma": 1.0, "beta": 1.0, "gamma-star": 0.0, "xi": 0.0, "p": 30.0, "t-max": 10.0},
    },
    "steady-sweep": {
        "keys": ("gamma", "beta", "gamma-star", "xi", "p-min", "p-max", "points", "workers"),
        "defaults": {"gamma": 1.0, "beta": 1.0, "gamma-star": 0.0, "xi": 3.0, "workers": 1, **GRID_DEFAULTS},
    },
    "qd-sweep": {
        "keys": ("gamma", "beta", "gamma-star", "g2", "gamma-xx", "p-min", "p-max", "points", "workers"),
        "defaults": {
            "gamma": 1.0, "beta": 1.0, "gamma-star": 0.0, "g2": 4.0, "gamma-xx": 2.0,
            "workers": 1, **GRID_DEFAULTS,
        },
    },
    "threshold": {
        "keys": ("gamma", "beta", "gamma-star", "xi"),
        "defaults": {"gamma": 1.0, "beta": 1.0, "gamma-star": 0.0, "xi": 3.0},
    },
    "validate": {
        "keys": FLOAT_KEYS + ("points", "steps"),
        "defaults": {
            "gamma": 1.0, "beta": 1.0, "gamma-star": 0.0, "xi": 0.0, "p": 0.0,
            "g2": 0.0, "gamma-xx": 2.0, "t-max": 10.0, **GRID_DEFAULTS,
        },
    },
}


class ConfigError(Exception):
    pass


@dataclass
class RunConfig:
    experiment: str
    values: dict = field(default_factory=dict)
    out: Optional[str] = None
    format: str = "csv"

    def to_dict(self) -> dict:
        d = {"experiment": self.experiment, **self.values, "format": self.format}
        if self.out is not None:
            d["out"] = self.out
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    def two_level(self) -> TwoLevelParams:
        v = self.values
        return TwoLevelParams(
            gamma=v["gamma"], beta=v["beta"], gamma_star=v["gamma-star"],
            xi=v.get("xi", 0.0), p=v.get("p", 0.0),
        )

    def three_level(self) -> ThreeLevelParams:
        v = self.values
        return ThreeLevelParams(
            gamma_X=v["gamma"], gamma_XX=v["gamma-xx"], g2=v["g2"], beta=v["beta"],
            p=v.get("p", 0.0), gamma_star=v["gamma-star"],
        )

    def power_grid(self) -> PowerGrid:
        v = self.values
        return PowerGrid(p_min=v["p-min"], p_max=v["p-max"], n_points=v["points"])


def _coerce(key: str, value):
    if key in INT_KEYS:
        if isinstance(value, bool) or not isinstance(value, (int, float, str)):
            raise ConfigError(f"invalid value for '{key}': expected an integer")
        try:
            f = float(value)
        except ValueError:
            raise ConfigError(f"invalid value for '{key}': expected an integer") from None
        if not f.is_integer():
            raise ConfigError(f"invalid value for '{key}': expected an integer")
        return int(f)
    if key in FLOAT_KEYS:
        if isinstance(value, bool) or not isinstance(value, (int, float, str)):
            raise ConfigError(f"invalid value for '{key}': expected a number")
        try:
            return float(value)
        except ValueError:
            raise ConfigError(f"invalid value for '{key}': expected a number") from None
    if key == "format":
        if value not in ("csv", "json"):
            raise ConfigError(f"invalid value for 'format': {value!r} (csv or json)")
        return value
    if key == "out":
        if not isinstance(value, str):
            raise ConfigError("invalid value for 'out': expected a path")
        return value
    raise ConfigError(f"unknown key '{key}'")


def _load_file(path: str) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"malformed config file {path}: {exc}") from None
    if not isinstance(data, dict):
        raise ConfigError(f"malformed config file {path}: expected a JSON object")
    return data


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="onedatom",
        description="Stimulated emission in one-dimensional atoms: figure datasets.",
    )
    sub = parser.add_subparsers(dest="experiment", required=True)
    for name, spec in EXPERIMENTS.items():
        sp = sub.add_parser(name)
        for key in spec["keys"]:
            kind = int if key in INT_KEYS else float
            sp.add_argument(f"--{key}", type=kind, default=None)
        sp.add_argument("--config", default=None, help="JSON file with flat keys named like the flags")
        sp.add_argument("--out", default=None, help="output path (default: stdout)")
        sp.add_argument("--format", choices=("csv", "json"), default=None)
    return parser


def parse_config(argv: Sequence[str]) -> RunConfig:
    """Merge defaults, config file and flags into a validated RunConfig.

    Raises ConfigError naming the offending key; argparse itself exits with
    status 2 on malformed flags.
    """
    args = build_parser().parse_args(list(argv))
    spec = EXPERIMENTS[args.experiment]
    allowed = set(spec["keys"]) | set(OUTPUT_KEYS)

    merged = dict(spec["defaults"])
    merged["format"] = "csv"
    if args.config is not None:
        for key, value in _load_file(args.config).items():
            if key == "experiment":
                if value != args.experiment:
                    raise ConfigError(
                        f"config file is for experiment '{value}', not '{args.experiment}'"
                    )
                continue
            if key not in allowed:
                raise ConfigError(f"unknown key '{key}' for {args.experiment}")
            merged[key] = _coerce(key, value)
    for key in allowed:
        value = getattr(args, key.replace("-", "_"))
        if value is not None:
            merged[key] = _coerce(key, value)

    out = merged.pop("out", None)
    fmt = merged.pop("format")
    cfg = RunConfig(args.experiment, merged, out, fmt)
    problems = config_problems(cfg)
    if problems:
        raise ConfigError("; ".join(problems))
    return cfg


def config_problems(cfg: RunConfig) -> list[str]:
    v = cfg.values
    problems = []
    if cfg.experiment in ("transient", "steady-sweep", "threshold", "validate"):
        problems += validate(cfg.two_level())
    if cfg.experiment in ("qd-sweep", "validate"):
        problems += [x for x in validate(cfg.three_level()) if x not in problems]
    if "p-min" in v:
        problems += validate(cfg.power_grid())
    if "t-max" in v:
        steps = v.get("steps")
        problems += validate(TimeGrid(v["t-max"], 2 if steps is None else steps))
    if v.get("workers", 1) < 1:
        problems.append("workers must be >= 1")
    return problems


def format_float(x: float) -> str:
    if math.isnan(x):
        return "nan"
    return format(x, ".17g")


def render_table(result: SweepResult, fmt: str) -> str:
    if fmt == "csv":
        lines = [",".join(result.columns)]
        lines += [",".join(format_float(v) for v in row) for row in result.rows()]
        return "\n".join(lines) + "\n"
    if fmt == "json":
        parts = []
        for j, name in enumerate(result.columns):
            vals = (
                format_float(float(v)) if math.isfinite(v) else "null"
                for v in result.data[:, j]
            )
            parts.append(f'  "{name}": [' + ", ".join(vals) + "]")
        return "{\n" + ",\n".join(parts) + "\n}\n"
    raise ValueError(f"unknown format {fmt!r}")


def write_table(result: SweepResult, fmt: str = "csv", path: Optional[str] = None) -> None:
    """Serialize ``result`` to ``path`` (stdout when None); bytes are deterministic."""
    text = render_table(result, fmt)
    if path is None:
        sys.stdout.write(text)
        return
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def run(cfg: RunConfig) -> Optional[SweepResult]:
    v = cfg.values
    if cfg.experiment == "transient":
        steps = v.get("steps")
        grid = None if steps is None else TimeGrid(v["t-max"], steps)
        return experiments.transient(cfg.two_level(), grid, t_max=v["t-max"]).table()
    if cfg.experiment == "steady-sweep":
        return experiments.run_steady_sweep(cfg.two_level(), cfg.power_grid(), v["workers"])
    if cfg.experiment == "qd-sweep":
        return experiments.run_qd_sweep(cfg.three_level(), cfg.power_grid(), v["workers"])
    if cfg.experiment == "threshold":
        params = cfg.two_level()
        row = [params.gamma, params.beta, params.gamma_star, params.xi, threshold_power(params)]
        return SweepResult(("gamma", "beta", "gamma_star", "xi", "p_th"), np.array([row]))
    return None


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    try:
        cfg = parse_config(argv)
    except (ConfigError, ParameterError) as exc:
        print(f"onedatom: error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except SystemExit as exc:  # argparse usage errors
        return EXIT_CONFIG if exc.code else EXIT_OK

    if cfg.experiment == "validate":
        print("ok")
        return EXIT_OK
    try:
        result = run(cfg)
    except ParameterError as exc:
        print(f"onedatom: error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except SolverError as exc:
        print(f"onedatom: solver error: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    try:
        write_table(result, cfg.format, cfg.out)
    except OSError as exc:
        target = cfg.out or "<stdout>"
        print(f"onedatom: cannot write {target}: {exc.strerror}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK

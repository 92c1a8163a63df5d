"""Run configuration: defaults < config file < command-line flags."""
from __future__ import annotations

import argparse
import os
from pathlib import Path
from typing import Any, Literal, Mapping, Sequence

import yaml
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator

from common.errors import ConfigValidationError
from netmodel.params import Mode, SimParams

CONFIG_ENV = "CLUSTERCOOP_CONFIG"
LOG_LEVEL_ENV = "CLUSTERCOOP_LOG_LEVEL"

COMMANDS = ("theory", "outage", "sweep", "tail", "geomcheck", "convergence")

# flag dest -> SimParams key
PARAM_FLAGS = {
    "lam": "lambda",
    "eta": "eta",
    "nu": "nu",
    "alpha": "alpha",
    "delta1": "delta1",
    "delta2": "delta2",
    "delta": "delta",
    "theta": "theta",
    "m_antennas": "m_antennas",
    "rings": "rings",
    "link_mode": "link_mode",
    "sidelobe_mode": "sidelobe_mode",
    "seed": "seed",
    "cell_attempts": "cell_attempts",
    "outer_radius": "outer_radius",
}
PARAM_KEYS = set(PARAM_FLAGS.values()) | {"lam"}
OPTION_FLAGS = (
    "mode",
    "k_values",
    "n_trials",
    "x_grid",
    "r",
    "rings_sweep",
    "tail_kind",
    "hold",
    "output",
    "format",
    "threads",
    "metrics_path",
    "log_level",
)


class RunConfig(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    command: Literal["theory", "outage", "sweep", "tail", "geomcheck", "convergence"]
    params: SimParams
    mode: Mode = Mode.CENTER
    k_values: list[float] | None = None
    n_trials: int = Field(default=10_000, ge=1)
    x_grid: list[float] | None = None
    r: float | None = None
    rings_sweep: list[int] | None = None
    tail_kind: Literal["link", "shot"] = "link"
    hold: Literal["lambda", "eta"] = "lambda"
    output: str | None = None
    format: Literal["csv", "json"] = "csv"
    threads: int = Field(default=1, ge=1)
    metrics_path: str | None = None
    log_level: str = "INFO"

    @field_validator("mode", mode="before")
    @classmethod
    def _lower_mode(cls, value: object) -> object:
        return value.lower() if isinstance(value, str) else value

    @field_validator("log_level")
    @classmethod
    def _known_level(cls, value: str) -> str:
        level = value.upper()
        if level not in ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"):
            raise ValueError(f"unknown log level {value!r}")
        return level

    @field_validator("k_values")
    @classmethod
    def _positive_k(cls, value: list[float] | None) -> list[float] | None:
        if value is not None and any(not k > 0 for k in value):
            raise ValueError("K values must be positive")
        return value

    @field_validator("r")
    @classmethod
    def _positive_r(cls, value: float | None) -> float | None:
        if value is not None and not value > 0:
            raise ValueError("truncation radius must be positive")
        return value

    @field_validator("rings_sweep")
    @classmethod
    def _rings(cls, value: list[int] | None) -> list[int] | None:
        if value is not None and any(r < 0 for r in value):
            raise ValueError("rings must be non-negative")
        return value

    def echo(self) -> dict[str, Any]:
        return self.model_dump(mode="json", by_alias=True)


class ConfigArgumentParser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # type: ignore[override]
        raise ConfigValidationError("argv", message)


def build_parser() -> argparse.ArgumentParser:
    parser = ConfigArgumentParser(prog="clustercoop", description="Clustered cooperation outage simulator")
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--config", help=f"YAML or JSON run configuration (env {CONFIG_ENV})")

    model = parser.add_argument_group("model parameters")
    model.add_argument("--lambda", dest="lam", type=float)
    model.add_argument("--eta", type=float)
    model.add_argument("--nu", type=float)
    model.add_argument("--alpha", type=float)
    model.add_argument("--delta1", type=float)
    model.add_argument("--delta2", type=float)
    model.add_argument("--delta", type=float)
    model.add_argument("--theta", type=float)
    model.add_argument("--m-antennas", dest="m_antennas", type=int)
    model.add_argument("--rings", type=int)
    model.add_argument("--link-mode", dest="link_mode")
    model.add_argument("--sidelobe-mode", dest="sidelobe_mode")
    model.add_argument("--seed", type=int)
    model.add_argument("--cell-attempts", dest="cell_attempts", type=int)
    model.add_argument("--outer-radius", dest="outer_radius", type=float)

    run = parser.add_argument_group("run options")
    run.add_argument("--mode")
    run.add_argument("--k-values", dest="k_values", type=float, nargs="+")
    run.add_argument("--n-trials", dest="n_trials", type=int)
    run.add_argument("--x-grid", dest="x_grid", type=float, nargs="+")
    run.add_argument("--r", type=float)
    run.add_argument("--rings-sweep", dest="rings_sweep", type=int, nargs="+")
    run.add_argument("--tail-kind", dest="tail_kind", choices=("link", "shot"))
    run.add_argument("--hold", choices=("lambda", "eta"))
    run.add_argument("--output", "-o")
    run.add_argument("--format", choices=("csv", "json"))
    run.add_argument("--threads", type=int)
    run.add_argument("--metrics-path", dest="metrics_path")
    run.add_argument("--log-level", dest="log_level")
    return parser


def load_config_file(path: str | Path) -> dict[str, Any]:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            data = yaml.safe_load(handle)
    except OSError as exc:
        raise ConfigValidationError("config", f"cannot read {path}: {exc}") from exc
    except yaml.YAMLError as exc:
        raise ConfigValidationError("config", f"cannot parse {path}: {exc}") from exc
    if data is None:
        return {}
    if not isinstance(data, dict):
        raise ConfigValidationError("config", f"{path} must hold a mapping")
    return data


def split_file_config(data: Mapping[str, Any]) -> tuple[dict[str, Any], dict[str, Any]]:
    """Separate SimParams keys (top level or under ``params``) from run options."""
    options = dict(data)
    nested = options.pop("params", None) or {}
    if not isinstance(nested, dict):
        raise ConfigValidationError("params", "must be a mapping")
    params = dict(nested)
    for key in list(options):
        if key in PARAM_KEYS:
            params[key] = options.pop(key)
    return params, options


def _key_from_error(exc: ValidationError) -> tuple[str, str]:
    first = exc.errors()[0]
    loc = [str(part) for part in first["loc"]]
    if loc and loc[0] == "params" and len(loc) > 1:
        loc = loc[1:]
    message = first["msg"].removeprefix("Value error, ")
    return ".".join(loc) or "config", message


def parse_and_validate(argv: Sequence[str] | None = None, environ: Mapping[str, str] | None = None) -> RunConfig:
    environ = os.environ if environ is None else environ
    args = build_parser().parse_args(argv)

    config_path = args.config or environ.get(CONFIG_ENV)
    params: dict[str, Any] = {}
    options: dict[str, Any] = {}
    if config_path:
        params, options = split_file_config(load_config_file(config_path))
    if "log_level" not in options and environ.get(LOG_LEVEL_ENV):
        options["log_level"] = environ[LOG_LEVEL_ENV]

    flags = vars(args)
    for dest, key in PARAM_FLAGS.items():
        if flags[dest] is not None:
            if key == "lambda":
                params.pop("lam", None)
            params[key] = flags[dest]
    for dest in OPTION_FLAGS:
        if flags[dest] is not None:
            options[dest] = flags[dest]

    try:
        run = RunConfig(command=args.command, params=params, **options)
    except ValidationError as exc:
        key, message = _key_from_error(exc)
        raise ConfigValidationError(key, message) from exc
    except TypeError as exc:
        raise ConfigValidationError("config", str(exc)) from exc
    _require_options(run)
    return run


def _require_options(run: RunConfig) -> None:
    if run.command == "sweep" and not run.k_values:
        raise ConfigValidationError("k_values", "sweep needs at least one K value")
    if run.command == "tail":
        if not run.x_grid:
            raise ConfigValidationError("x_grid", "tail needs an x grid")
        if run.tail_kind == "shot" and run.r is None:
            raise ConfigValidationError("r", "shot-noise tail needs a truncation radius")
    if run.command == "convergence" and not run.rings_sweep:
        raise ConfigValidationError("rings_sweep", "convergence needs a list of ring counts")

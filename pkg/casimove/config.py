from __future__ import annotations

import json
import logging
import math
from collections.abc import Iterator, Mapping
from dataclasses import dataclass, field, fields, replace
from pathlib import Path
from typing import Any, Literal

import numpy as np

from casimove.cavity import CavityConfig, PlateConfig
from casimove.exceptions import ConfigError, MaterialError
from casimove.material import DispersionModel, Medium, ModelKind, Response
from casimove.quadrature import IntegrationPlan
from casimove.spectral import Channel

logger = logging.getLogger("casimove")

OutputFormat = Literal["csv", "json"]
SweepVariable = Literal["a", "beta", "T1", "T2"]

_SWEEP_VARIABLES: tuple[str, ...] = ("a", "beta", "T1", "T2")
_TOP_KEYS = frozenset({"gap", "beta", "plate1", "plate2", "plan", "output", "sweep", "spectrum"})
_PLATE_KEYS = frozenset({"epsilon", "mu", "temperature"})
_MODEL_KEYS = frozenset({"kind", "params"})
_OUTPUT_KEYS = frozenset({"format", "path"})
_GRID_KEYS = frozenset({"values", "start", "stop", "num", "spacing"})
_PLAN_FIELDS: dict[str, type] = {
    "rel_tol": float,
    "abs_tol": float,
    "max_cells": int,
    "batch": int,
    "threads": int,
    "fold_v": bool,
    "cutoff": float,
    "disk_radius": float,
    "real_omega_max": float,
}


# --- Field helpers ---


def _join(path: str, key: str) -> str:
    return f"{path}.{key}" if path else key


def _mapping(value: Any, path: str) -> Mapping[str, Any]:
    if not isinstance(value, Mapping):
        raise ConfigError(path or "<root>", "must be an object")
    return value


def _check_keys(data: Mapping[str, Any], allowed: frozenset[str], path: str) -> None:
    unknown = sorted(set(data) - allowed)
    if unknown:
        raise ConfigError(_join(path, unknown[0]), "unknown key")


def _number(value: Any, path: str, *, positive: bool = False, non_negative: bool = False) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)) or not math.isfinite(value):
        raise ConfigError(path, "must be a finite number")
    if positive and not value > 0:
        raise ConfigError(path, "must be a positive number")
    if non_negative and value < 0:
        raise ConfigError(path, "must be >= 0")
    return float(value)


def _integer(value: Any, path: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int) or value < 1:
        raise ConfigError(path, "must be a positive integer")
    return value


# --- Grids ---


@dataclass(frozen=True)
class GridSpec:
    """Either explicit ``values`` or ``num`` points from ``start`` to ``stop``."""

    values: tuple[float, ...] | None = None
    start: float | None = None
    stop: float | None = None
    num: int | None = None
    spacing: Literal["linear", "log"] = "linear"

    def points(self) -> list[float]:
        if self.values is not None:
            return list(self.values)
        assert self.start is not None and self.stop is not None and self.num is not None
        if self.spacing == "log":
            return [float(x) for x in np.geomspace(self.start, self.stop, self.num)]
        return [float(x) for x in np.linspace(self.start, self.stop, self.num)]

    def to_dict(self) -> dict[str, Any]:
        if self.values is not None:
            return {"values": list(self.values)}
        return {"start": self.start, "stop": self.stop, "num": self.num, "spacing": self.spacing}


def parse_grid(data: Any, path: str) -> GridSpec:
    data = _mapping(data, path)
    _check_keys(data, _GRID_KEYS, path)
    if "values" in data:
        extra = sorted(set(data) - {"values"})
        if extra:
            raise ConfigError(_join(path, extra[0]), "cannot be combined with values")
        raw = data["values"]
        if not isinstance(raw, list) or not raw:
            raise ConfigError(_join(path, "values"), "must be a non-empty list")
        values = tuple(_number(v, f"{_join(path, 'values')}[{i}]") for i, v in enumerate(raw))
        return GridSpec(values=values)
    for key in ("start", "stop", "num"):
        if key not in data:
            raise ConfigError(_join(path, key), "missing (or give values)")
    start = _number(data["start"], _join(path, "start"))
    stop = _number(data["stop"], _join(path, "stop"))
    num = _integer(data["num"], _join(path, "num"))
    spacing = data.get("spacing", "linear")
    if spacing not in ("linear", "log"):
        raise ConfigError(_join(path, "spacing"), "must be 'linear' or 'log'")
    if spacing == "log" and not (start > 0 and stop > 0):
        raise ConfigError(path, "log spacing needs positive start and stop")
    return GridSpec(start=start, stop=stop, num=num, spacing=spacing)


# --- Sections ---


@dataclass(frozen=True)
class OutputConfig:
    format: OutputFormat = "csv"
    path: str | None = None


@dataclass(frozen=True)
class SweepConfig:
    variable: SweepVariable
    grid: GridSpec


@dataclass(frozen=True)
class SpectrumConfig:
    """Density grid in reduced units; ``omega`` holds kappa for the imaginary-axis channel."""

    channel: Channel
    omega: GridSpec
    u: GridSpec
    v: GridSpec


@dataclass(frozen=True)
class RunConfig:
    gap: float
    beta: float = 0.0
    plate1: PlateConfig = field(default_factory=PlateConfig)
    plate2: PlateConfig = field(default_factory=PlateConfig)
    plan: IntegrationPlan = field(default_factory=IntegrationPlan)
    output: OutputConfig = field(default_factory=OutputConfig)
    sweep: SweepConfig | None = None
    spectrum: SpectrumConfig | None = None

    def cavity_config(self) -> CavityConfig:
        return CavityConfig(self.gap, self.beta, self.plate1, self.plate2)

    def at(self, variable: SweepVariable, value: float) -> RunConfig:
        """Copy with one sweep variable replaced."""
        if variable == "a":
            return replace(self, gap=value)
        if variable == "beta":
            return replace(self, beta=value)
        if variable == "T1":
            return replace(self, plate1=replace(self.plate1, temperature=value))
        if variable == "T2":
            return replace(self, plate2=replace(self.plate2, temperature=value))
        raise ValueError(f"Unknown sweep variable: {variable}")

    def points(self) -> Iterator[tuple[float | None, RunConfig]]:
        """(sweep value, config) per run point; a single (None, self) without a sweep."""
        if self.sweep is None:
            yield None, self
            return
        for value in self.sweep.grid.points():
            try:
                point = self.at(self.sweep.variable, value)
                point.cavity_config().units
            except ConfigError as exc:
                raise ConfigError(f"sweep.{self.sweep.variable}={value}", str(exc)) from exc
            yield value, point

    def with_overrides(self, **overrides: Any) -> RunConfig:
        """Apply CLI flags; ``None`` leaves a value untouched."""
        plan_changes = {k: v for k, v in overrides.items() if k in _PLAN_FIELDS and v is not None}
        output_changes = {k: v for k, v in overrides.items() if k in ("format", "path") and v is not None}
        unknown = set(overrides) - set(_PLAN_FIELDS) - {"format", "path"}
        if unknown:
            raise ValueError(f"Unknown override: {sorted(unknown)[0]}")
        try:
            plan = replace(self.plan, **plan_changes)
        except ValueError as exc:
            raise ConfigError("plan", str(exc)) from exc
        return replace(self, plan=plan, output=replace(self.output, **output_changes))

    def to_dict(self) -> dict[str, Any]:
        data: dict[str, Any] = {
            "gap": self.gap,
            "beta": self.beta,
            "plate1": _plate_to_dict(self.plate1),
            "plate2": _plate_to_dict(self.plate2),
            "plan": _plan_to_dict(self.plan),
            "output": {"format": self.output.format, "path": self.output.path},
        }
        if self.sweep is not None:
            data["sweep"] = {"variable": self.sweep.variable, **self.sweep.grid.to_dict()}
        if self.spectrum is not None:
            data["spectrum"] = {
                "channel": self.spectrum.channel.value,
                "omega": self.spectrum.omega.to_dict(),
                "u": self.spectrum.u.to_dict(),
                "v": self.spectrum.v.to_dict(),
            }
        return data


def _plate_to_dict(plate: PlateConfig) -> dict[str, Any]:
    return {
        "epsilon": plate.medium.epsilon.to_dict(),
        "mu": plate.medium.mu.to_dict(),
        "temperature": plate.temperature,
    }


def _plan_to_dict(plan: IntegrationPlan) -> dict[str, Any]:
    return {f.name: getattr(plan, f.name) for f in fields(plan)}


def _parse_model(data: Any, path: str, response: Response) -> DispersionModel:
    data = _mapping(data, path)
    _check_keys(data, _MODEL_KEYS, path)
    if "kind" not in data:
        raise ConfigError(_join(path, "kind"), "missing")
    try:
        kind = ModelKind(data["kind"])
    except ValueError:
        choices = ", ".join(k.value for k in ModelKind)
        raise ConfigError(_join(path, "kind"), f"must be one of: {choices}") from None
    params_path = _join(path, "params")
    raw = _mapping(data.get("params", {}), params_path)
    params = {}
    for name, value in raw.items():
        params[name] = _number(value, _join(params_path, name))
    try:
        return DispersionModel(kind, params, response)
    except MaterialError as exc:
        raise ConfigError(params_path, str(exc)) from exc


def _parse_plate(data: Any, path: str) -> PlateConfig:
    data = _mapping(data, path)
    _check_keys(data, _PLATE_KEYS, path)
    epsilon = (
        _parse_model(data["epsilon"], _join(path, "epsilon"), Response.PERMITTIVITY)
        if "epsilon" in data
        else DispersionModel(ModelKind.VACUUM)
    )
    mu = (
        _parse_model(data["mu"], _join(path, "mu"), Response.PERMEABILITY)
        if "mu" in data
        else DispersionModel(ModelKind.VACUUM, applies_to=Response.PERMEABILITY)
    )
    try:
        medium = Medium(epsilon, mu)
    except MaterialError as exc:
        raise ConfigError(path, str(exc)) from exc
    temperature = _number(data.get("temperature", 0.0), _join(path, "temperature"), non_negative=True)
    return PlateConfig(medium, temperature)


def _parse_plan(data: Any, path: str) -> IntegrationPlan:
    data = _mapping(data, path)
    _check_keys(data, frozenset(_PLAN_FIELDS), path)
    kwargs: dict[str, Any] = {}
    for name, value in data.items():
        key_path = _join(path, name)
        kind = _PLAN_FIELDS[name]
        if value is None and name in ("rel_tol", "disk_radius"):
            kwargs[name] = None
        elif kind is bool:
            if not isinstance(value, bool):
                raise ConfigError(key_path, "must be true or false")
            kwargs[name] = value
        elif kind is int:
            kwargs[name] = _integer(value, key_path)
        else:
            kwargs[name] = _number(value, key_path, positive=True)
    try:
        return IntegrationPlan(**kwargs)
    except ValueError as exc:
        raise ConfigError(path, str(exc)) from exc


def _parse_output(data: Any, path: str) -> OutputConfig:
    data = _mapping(data, path)
    _check_keys(data, _OUTPUT_KEYS, path)
    fmt = data.get("format", "csv")
    if fmt not in ("csv", "json"):
        raise ConfigError(_join(path, "format"), "must be 'csv' or 'json'")
    out_path = data.get("path")
    if out_path is not None and not isinstance(out_path, str):
        raise ConfigError(_join(path, "path"), "must be a string or null")
    return OutputConfig(fmt, out_path)


def _parse_sweep(data: Any, path: str) -> SweepConfig:
    data = _mapping(data, path)
    _check_keys(data, _GRID_KEYS | {"variable"}, path)
    variable = data.get("variable")
    if variable not in _SWEEP_VARIABLES:
        raise ConfigError(_join(path, "variable"), f"must be one of: {', '.join(_SWEEP_VARIABLES)}")
    grid = parse_grid({k: v for k, v in data.items() if k != "variable"}, path)
    return SweepConfig(variable, grid)


def _parse_spectrum(data: Any, path: str) -> SpectrumConfig:
    data = _mapping(data, path)
    _check_keys(data, frozenset({"channel", "omega", "u", "v"}), path)
    try:
        channel = Channel(data.get("channel"))
    except ValueError:
        choices = ", ".join(c.value for c in Channel)
        raise ConfigError(_join(path, "channel"), f"must be one of: {choices}") from None
    grids = {}
    for axis in ("omega", "u", "v"):
        if axis not in data:
            raise ConfigError(_join(path, axis), "missing")
        grids[axis] = parse_grid(data[axis], _join(path, axis))
    return SpectrumConfig(channel, grids["omega"], grids["u"], grids["v"])


def parse_config(data: Any) -> RunConfig:
    data = _mapping(data, "")
    _check_keys(data, _TOP_KEYS, "")
    if "gap" not in data:
        raise ConfigError("gap", "missing")
    gap = _number(data["gap"], "gap", positive=True)
    beta = _number(data.get("beta", 0.0), "beta")
    if not -1.0 < beta < 1.0:
        raise ConfigError("beta", "must satisfy |beta| < 1")
    config = RunConfig(
        gap=gap,
        beta=beta,
        plate1=_parse_plate(data.get("plate1", {}), "plate1"),
        plate2=_parse_plate(data.get("plate2", {}), "plate2"),
        plan=_parse_plan(data.get("plan", {}), "plan"),
        output=_parse_output(data.get("output", {}), "output"),
        sweep=_parse_sweep(data["sweep"], "sweep") if data.get("sweep") is not None else None,
        spectrum=_parse_spectrum(data["spectrum"], "spectrum") if data.get("spectrum") is not None else None,
    )
    if config.sweep is not None:
        # validate every sweep point up front
        for _ in config.points():
            pass
    return config


def load_config(path: str | Path) -> RunConfig:
    path = Path(path)
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except OSError as exc:
        raise ConfigError(str(path), f"cannot read: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(str(path), f"invalid JSON at line {exc.lineno}: {exc.msg}") from exc
    config = parse_config(data)
    logger.debug("Loaded run config from %s", path)
    return config


def dump_config(config: RunConfig, path: str | Path) -> None:
    Path(path).write_text(json.dumps(config.to_dict(), indent=2), encoding="utf-8")

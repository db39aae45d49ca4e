from __future__ import annotations

from collections.abc import Mapping
from dataclasses import dataclass, field
from enum import Enum
from typing import Any

import numpy as np

from casimove.exceptions import FrequencyDomainError, MaterialError, SingularFrequencyError


class ModelKind(str, Enum):
    VACUUM = "vacuum"
    CONSTANT = "constant"
    DRUDE = "drude"
    LORENTZ = "lorentz"
    PERFECT_MIRROR = "perfect_mirror"


class Response(str, Enum):
    PERMITTIVITY = "permittivity"
    PERMEABILITY = "permeability"


_REQUIRED: dict[ModelKind, tuple[str, ...]] = {
    ModelKind.VACUUM: (),
    ModelKind.CONSTANT: ("value",),
    ModelKind.DRUDE: ("plasma", "damping"),
    ModelKind.LORENTZ: ("strength", "resonance", "damping"),
    ModelKind.PERFECT_MIRROR: (),
}

_OPTIONAL: dict[ModelKind, dict[str, float]] = {
    ModelKind.VACUUM: {},
    ModelKind.CONSTANT: {"loss": 0.0},
    ModelKind.DRUDE: {"background": 1.0},
    ModelKind.LORENTZ: {"background": 1.0},
    ModelKind.PERFECT_MIRROR: {},
}

# Parameters carrying a frequency; rescaled when switching to reduced units.
FREQUENCY_PARAMS: frozenset[str] = frozenset({"plasma", "damping", "resonance"})

_PERMEABILITY_KINDS = frozenset({ModelKind.VACUUM, ModelKind.CONSTANT})


@dataclass(frozen=True)
class DispersionModel:
    """Causal, passive response model for epsilon or mu.

    Drude:    background - plasma**2 / (omega * (omega + i*damping))
    Lorentz:  background + strength * resonance**2 / (resonance**2 - omega**2 - i*damping*omega)
    Constant: value + i*loss
    """

    kind: ModelKind
    params: Mapping[str, float] = field(default_factory=dict)
    applies_to: Response = Response.PERMITTIVITY

    def __post_init__(self) -> None:
        kind = ModelKind(self.kind)
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "applies_to", Response(self.applies_to))
        allowed = set(_REQUIRED[kind]) | set(_OPTIONAL[kind])
        unknown = sorted(set(self.params) - allowed)
        if unknown:
            raise MaterialError(kind.value, f"unknown parameters: {', '.join(unknown)}")
        missing = [name for name in _REQUIRED[kind] if name not in self.params]
        if missing:
            raise MaterialError(kind.value, f"missing parameters: {', '.join(missing)}")
        merged = {**_OPTIONAL[kind], **{k: float(v) for k, v in self.params.items()}}
        object.__setattr__(self, "params", merged)
        if self.applies_to is Response.PERMEABILITY and kind not in _PERMEABILITY_KINDS:
            raise MaterialError(kind.value, "permeability supports only vacuum or constant models")
        self._check_passive()

    def _check_passive(self) -> None:
        p = self.params
        if self.kind is ModelKind.CONSTANT:
            if p["loss"] < 0:
                raise MaterialError(self.kind.value, "negative loss describes a gain medium")
            if p["loss"] == 0 and p["value"] <= 0:
                raise MaterialError(self.kind.value, "lossless constant response must be positive")
        elif self.kind is ModelKind.DRUDE:
            if p["plasma"] <= 0:
                raise MaterialError(self.kind.value, "plasma frequency must be positive")
            if p["damping"] <= 0:
                raise MaterialError(self.kind.value, "damping must be positive (lossless poles are not supported)")
            if p["background"] < 1:
                raise MaterialError(self.kind.value, "background permittivity must be >= 1")
        elif self.kind is ModelKind.LORENTZ:
            if p["strength"] < 0:
                raise MaterialError(self.kind.value, "negative oscillator strength describes a gain medium")
            if p["resonance"] <= 0:
                raise MaterialError(self.kind.value, "resonance frequency must be positive")
            if p["damping"] <= 0:
                raise MaterialError(self.kind.value, "damping must be positive (lossless poles are not supported)")
            if p["background"] < 1:
                raise MaterialError(self.kind.value, "background permittivity must be >= 1")

    @property
    def is_lossy(self) -> bool:
        if self.kind is ModelKind.CONSTANT:
            return self.params["loss"] > 0
        return self.kind in (ModelKind.DRUDE, ModelKind.LORENTZ)

    def rescaled(self, frequency_unit: float) -> DispersionModel:
        """Express frequency parameters in units of ``frequency_unit``."""
        params = {
            name: value / frequency_unit if name in FREQUENCY_PARAMS else value
            for name, value in self.params.items()
        }
        return DispersionModel(self.kind, params, self.applies_to)

    def to_dict(self) -> dict[str, Any]:
        data: dict[str, Any] = {"kind": self.kind.value}
        if self.params:
            data["params"] = dict(self.params)
        return data


VACUUM_PERMITTIVITY = DispersionModel(ModelKind.VACUUM)
VACUUM_PERMEABILITY = DispersionModel(ModelKind.VACUUM, applies_to=Response.PERMEABILITY)


def evaluate(model: DispersionModel, omega: complex | np.ndarray) -> Any:
    """Response of ``model`` at ``omega``.

    Admissible frequencies form the closed upper half-plane. Points with
    Re(omega) < 0 are evaluated at -conj(omega) and conjugated, so
    evaluate(-w) == conj(evaluate(w)) bit for bit on the real axis.
    """
    if model.kind is ModelKind.PERFECT_MIRROR:
        raise MaterialError(model.kind.value, "limit model requires limit-form reflection")
    z = np.asarray(omega, dtype=complex)
    if np.any(z.imag < 0):
        raise FrequencyDomainError("responses are defined only for Im(omega) >= 0")
    flip = z.real < 0
    z_eval = np.where(flip, -z.conj(), z)
    value = _response(model, z_eval)
    value = np.where(flip, value.conj(), value)
    on_imaginary_axis = (z.real == 0) & (z.imag > 0)
    value = np.where(on_imaginary_axis, value.real + 0j, value)
    if value.ndim == 0:
        return complex(value)
    return value


def _response(model: DispersionModel, z: np.ndarray) -> np.ndarray:
    p = model.params
    if model.kind is ModelKind.VACUUM:
        return np.ones_like(z)
    if model.kind is ModelKind.CONSTANT:
        return np.full_like(z, complex(p["value"], p["loss"]))
    if model.kind is ModelKind.DRUDE:
        if np.any(z == 0):
            raise SingularFrequencyError("drude response is singular at omega = 0")
        return p["background"] - p["plasma"] ** 2 / (z * (z + 1j * p["damping"]))
    if model.kind is ModelKind.LORENTZ:
        w0 = p["resonance"]
        return p["background"] + p["strength"] * w0**2 / (w0**2 - z * z - 1j * p["damping"] * z)
    raise ValueError(f"Unknown model kind: {model.kind}")


@dataclass(frozen=True)
class Medium:
    """Half-space filling one plate: permittivity and permeability models."""

    epsilon: DispersionModel = VACUUM_PERMITTIVITY
    mu: DispersionModel = VACUUM_PERMEABILITY

    def __post_init__(self) -> None:
        if self.epsilon.applies_to is not Response.PERMITTIVITY:
            raise MaterialError(self.epsilon.kind.value, "epsilon slot needs a permittivity model")
        if self.mu.applies_to is not Response.PERMEABILITY:
            raise MaterialError(self.mu.kind.value, "mu slot needs a permeability model")
        if self.epsilon.kind is ModelKind.PERFECT_MIRROR and self.mu.kind is not ModelKind.VACUUM:
            raise MaterialError(self.epsilon.kind.value, "perfect mirror takes no permeability model")

    @property
    def is_vacuum(self) -> bool:
        return self.epsilon.kind is ModelKind.VACUUM and self.mu.kind is ModelKind.VACUUM

    @property
    def is_perfect_mirror(self) -> bool:
        return self.epsilon.kind is ModelKind.PERFECT_MIRROR

    def response(self, omega: complex | np.ndarray) -> tuple[Any, Any]:
        return evaluate(self.epsilon, omega), evaluate(self.mu, omega)

    def rescaled(self, frequency_unit: float) -> Medium:
        return Medium(self.epsilon.rescaled(frequency_unit), self.mu.rescaled(frequency_unit))


VACUUM = Medium()
PERFECT_MIRROR = Medium(DispersionModel(ModelKind.PERFECT_MIRROR))

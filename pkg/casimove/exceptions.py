from __future__ import annotations


class CasimoveError(Exception):
    """Base exception for casimove."""


class MaterialError(CasimoveError):
    """Raised when a dispersion model is invalid or cannot be evaluated."""

    def __init__(self, model_kind: str, message: str) -> None:
        self.model_kind = model_kind
        super().__init__(f"[{model_kind}] {message}")


class FrequencyDomainError(CasimoveError):
    """Raised when a response is requested in the lower half of the frequency plane."""

    def __init__(self, message: str) -> None:
        super().__init__(message)


class SingularFrequencyError(CasimoveError):
    """Raised for omega = 0, where the occupation split or a model is singular."""

    def __init__(self, message: str) -> None:
        super().__init__(message)


class KinematicDomainError(CasimoveError):
    """Raised for |beta| >= 1 or a non-positive real sample frequency."""

    def __init__(self, message: str) -> None:
        super().__init__(message)


class DegenerateBasisError(KinematicDomainError):
    """Raised when the polarization basis is undefined (s = 0 or a non-positive frame radicand)."""


class ReflectionPoleError(CasimoveError):
    """Raised when a Fresnel denominator vanishes."""

    def __init__(self, plate: str, message: str) -> None:
        self.plate = plate
        super().__init__(f"[{plate}] {message}")


class CavityResonanceError(CasimoveError):
    """Raised when the cavity denominator vanishes to working precision."""

    def __init__(self, message: str, point: tuple[complex, float, float] | None = None) -> None:
        self.point = point
        if point is not None:
            omega, u, v = point
            message = f"{message} at omega={omega}, u={u}, v={v}"
        super().__init__(message)


class ConfigError(CasimoveError):
    """Raised when a run configuration fails validation."""

    def __init__(self, path: str, message: str) -> None:
        self.path = path
        super().__init__(f"[{path}] {message}")

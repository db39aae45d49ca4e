from __future__ import annotations

from dataclasses import dataclass, field

from casimove._constants import BOLTZMANN, HBAR, SPEED_OF_LIGHT
from casimove.exceptions import ConfigError, KinematicDomainError
from casimove.kinematics import lorentz_factor
from casimove.material import VACUUM, Medium


@dataclass(frozen=True)
class UnitSystem:
    """Conversion between SI and reduced units (hbar = c = k_B = 1, lengths in the gap a)."""

    gap: float

    def __post_init__(self) -> None:
        if not self.gap > 0:
            raise ConfigError("a", f"gap must be positive, got {self.gap}")

    @property
    def frequency_unit(self) -> float:
        """c / a in rad/s."""
        return SPEED_OF_LIGHT / self.gap

    @property
    def temperature_unit(self) -> float:
        """hbar c / (k_B a) in K."""
        return HBAR * SPEED_OF_LIGHT / (BOLTZMANN * self.gap)

    @property
    def stress_unit(self) -> float:
        """hbar c / a**4 in Pa."""
        return HBAR * SPEED_OF_LIGHT / self.gap**4

    @property
    def flux_unit(self) -> float:
        """hbar c**2 / a**4 in W/m**2."""
        return HBAR * SPEED_OF_LIGHT**2 / self.gap**4


@dataclass(frozen=True)
class PlateConfig:
    medium: Medium = VACUUM
    temperature: float = 0.0

    def __post_init__(self) -> None:
        if not self.temperature >= 0:
            raise ConfigError("temperature", f"must be >= 0, got {self.temperature}")


@dataclass(frozen=True)
class Cavity:
    """A cavity in reduced units; the object every integrator works on."""

    beta: float = 0.0
    medium1: Medium = VACUUM
    medium2: Medium = VACUUM
    t1: float = 0.0
    t2: float = 0.0
    gamma: float = field(init=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "gamma", lorentz_factor(self.beta))
        if self.t1 < 0 or self.t2 < 0:
            raise KinematicDomainError(f"temperatures must be >= 0, got {self.t1}, {self.t2}")


@dataclass(frozen=True)
class CavityConfig:
    """Two plates with gap ``gap`` [m]; plate 2 slides along +y at ``beta`` c."""

    gap: float
    beta: float = 0.0
    plate1: PlateConfig = field(default_factory=PlateConfig)
    plate2: PlateConfig = field(default_factory=PlateConfig)

    def __post_init__(self) -> None:
        if not -1.0 < self.beta < 1.0:
            raise ConfigError("beta", f"must satisfy |beta| < 1, got {self.beta}")

    @property
    def units(self) -> UnitSystem:
        return UnitSystem(self.gap)

    def reduced(self) -> Cavity:
        units = self.units
        return Cavity(
            beta=self.beta,
            medium1=self.plate1.medium.rescaled(units.frequency_unit),
            medium2=self.plate2.medium.rescaled(units.frequency_unit),
            t1=self.plate1.temperature / units.temperature_unit,
            t2=self.plate2.temperature / units.temperature_unit,
        )

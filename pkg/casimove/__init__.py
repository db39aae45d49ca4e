__version__ = "0.1.0"

from casimove.cavity import Cavity, CavityConfig, PlateConfig, UnitSystem
from casimove.config import RunConfig, load_config, parse_config
from casimove.event_log import EventLog, QuadratureEvent
from casimove.exceptions import (
    CasimoveError,
    CavityResonanceError,
    ConfigError,
    DegenerateBasisError,
    FrequencyDomainError,
    KinematicDomainError,
    MaterialError,
    ReflectionPoleError,
    SingularFrequencyError,
)
from casimove.green import build_operators, direct_green_tensor, expand_inverse, green_tensor
from casimove.kinematics import Region, WaveContext, build_context, build_imaginary_context
from casimove.material import PERFECT_MIRROR, VACUUM, DispersionModel, Medium, ModelKind, Response
from casimove.quadrature import (
    ChannelIntegral,
    HeatResult,
    IntegrationPlan,
    StressParts,
    StressResult,
    async_integrate_channel,
    async_integrate_force,
    async_integrate_heat,
    integrate_channel,
    integrate_force,
    integrate_heat,
)
from casimove.reflection import ReflectionSet, reflect
from casimove.spectral import Channel, DensitySample, evaluate_density, sample_density
from casimove.validation import IdentityCheck, run_validation

__all__ = [
    "__version__",
    "async_integrate_channel",
    "async_integrate_force",
    "async_integrate_heat",
    "build_context",
    "build_imaginary_context",
    "build_operators",
    "CasimoveError",
    "Cavity",
    "CavityConfig",
    "CavityResonanceError",
    "Channel",
    "ChannelIntegral",
    "ConfigError",
    "DegenerateBasisError",
    "DensitySample",
    "direct_green_tensor",
    "DispersionModel",
    "evaluate_density",
    "EventLog",
    "expand_inverse",
    "FrequencyDomainError",
    "green_tensor",
    "HeatResult",
    "IdentityCheck",
    "integrate_channel",
    "integrate_force",
    "integrate_heat",
    "IntegrationPlan",
    "KinematicDomainError",
    "load_config",
    "MaterialError",
    "Medium",
    "ModelKind",
    "parse_config",
    "PERFECT_MIRROR",
    "PlateConfig",
    "QuadratureEvent",
    "ReflectionPoleError",
    "ReflectionSet",
    "reflect",
    "Region",
    "Response",
    "run_validation",
    "RunConfig",
    "sample_density",
    "SingularFrequencyError",
    "StressParts",
    "StressResult",
    "UnitSystem",
    "VACUUM",
    "WaveContext",
]

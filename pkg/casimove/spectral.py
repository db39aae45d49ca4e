from __future__ import annotations

from collections.abc import Callable
from dataclasses import dataclass
from enum import Enum
from typing import Any

import numpy as np

from casimove._constants import LATERAL_PREFACTOR, PLATE_PREFACTOR, QVAC_PREFACTOR
from casimove.cavity import Cavity
from casimove.exceptions import SingularFrequencyError
from casimove.kinematics import Region, WaveContext, build_context, build_imaginary_context
from casimove.reflection import ReflectionSet, reflect


class Channel(str, Enum):
    SIGMA1_XX = "sigma1_xx"
    SIGMA1_XY = "sigma1_xy"
    POYNTING1_X = "poynting1_x"
    SIGMA2_XX = "sigma2_xx"
    SIGMA2_XY = "sigma2_xy"
    POYNTING2_X = "poynting2_x"
    LATERAL = "lateral"
    QVAC_IMAG = "qvac_imag"
    QVAC_REAL = "qvac_real"

    @property
    def on_imaginary_axis(self) -> bool:
        return self is Channel.QVAC_IMAG

    @property
    def source_plate(self) -> int:
        """1 or 2 for per-plate channels, 0 for the combined ones."""
        if self in (Channel.SIGMA1_XX, Channel.SIGMA1_XY, Channel.POYNTING1_X):
            return 1
        if self in (Channel.SIGMA2_XX, Channel.SIGMA2_XY, Channel.POYNTING2_X):
            return 2
        return 0


PLATE1_CHANNELS = frozenset({Channel.SIGMA1_XX, Channel.SIGMA1_XY, Channel.POYNTING1_X})
PLATE2_CHANNELS = frozenset({Channel.SIGMA2_XX, Channel.SIGMA2_XY, Channel.POYNTING2_X})


@dataclass(frozen=True)
class OccupationFactor:
    """coth(omega / 2T) = quantum + thermal, with quantum = sgn(omega)."""

    quantum: np.ndarray
    thermal: np.ndarray

    @property
    def total(self) -> np.ndarray:
        return self.quantum + self.thermal


@dataclass(frozen=True)
class DensitySample:
    value: np.ndarray
    quantum: np.ndarray
    thermal: np.ndarray
    region: np.ndarray
    channel: Channel


def planck(omega: Any, temperature: float) -> np.ndarray:
    """Mean photon number 1/(exp(omega/T) - 1) for omega > 0; zero at T = 0."""
    omega = np.asarray(omega, dtype=float)
    if temperature == 0:
        return np.zeros_like(omega)
    with np.errstate(over="ignore"):
        return 1.0 / np.expm1(omega / temperature)


def occupation(omega: Any, temperature: float) -> OccupationFactor:
    omega = np.asarray(omega, dtype=float)
    if np.any(omega == 0):
        raise SingularFrequencyError("occupation factor is singular at omega = 0")
    sign = np.sign(omega)
    return OccupationFactor(quantum=sign, thermal=2.0 * sign * planck(np.abs(omega), temperature))


# --- Brace structure ---


def _brace(
    source: tuple[np.ndarray, np.ndarray],
    partner: tuple[np.ndarray, np.ndarray],
    same: tuple[np.ndarray, np.ndarray],
    cross: tuple[np.ndarray, np.ndarray],
    p2: np.ndarray,
    v: np.ndarray,
) -> np.ndarray:
    """Source-E term plus its (E<->B) partner inside the density braces."""
    (src_e, src_b), (par_e, par_b) = source, partner
    return src_e * (par_e * same[0] * p2 + par_b * cross[0] * v) + src_b * (
        par_b * same[1] * p2 + par_e * cross[1] * v
    )


def _cavity_weights(refl: ReflectionSet, source_plate: int) -> tuple[
    tuple[np.ndarray, np.ndarray], tuple[np.ndarray, np.ndarray]
]:
    same = (np.abs(refl.a_bb) ** 2, np.abs(refl.a_ee) ** 2)
    if source_plate == 1:
        cross = (np.abs(refl.a_be) ** 2, np.abs(refl.a_eb) ** 2)
    else:
        cross = (np.abs(refl.a_eb) ** 2, np.abs(refl.a_be) ** 2)
    return same, cross


def _source_partner(
    refl: ReflectionSet, source_plate: int
) -> tuple[tuple[np.ndarray, np.ndarray], tuple[np.ndarray, np.ndarray]]:
    plate1 = (refl.r_e1, refl.r_b1)
    plate2 = (refl.r_e2, refl.r_b2)
    return (plate1, plate2) if source_plate == 1 else (plate2, plate1)


def _evanescent_bracket(refl: ReflectionSet, source_plate: int, *, lateral: bool) -> np.ndarray:
    source, partner = _source_partner(refl, source_plate)
    same, cross = _cavity_weights(refl, source_plate)
    partner_part = np.imag if lateral else np.real
    return 4.0 * _brace(
        (source[0].imag, source[1].imag),
        (partner_part(partner[0]), partner_part(partner[1])),
        same,
        cross,
        np.real(refl.kin_p) ** 2,
        np.real(refl.kin_v),
    )


def _propagating_bracket(refl: ReflectionSet, source_plate: int, *, lateral: bool) -> np.ndarray:
    source, partner = _source_partner(refl, source_plate)
    same, cross = _cavity_weights(refl, source_plate)
    sign = -1.0 if lateral else 1.0
    return _brace(
        (1.0 - np.abs(source[0]) ** 2, 1.0 - np.abs(source[1]) ** 2),
        (1.0 + sign * np.abs(partner[0]) ** 2, 1.0 + sign * np.abs(partner[1]) ** 2),
        same,
        cross,
        np.real(refl.kin_p) ** 2,
        np.real(refl.kin_v),
    )


def _kernel(ctx: WaveContext, refl: ReflectionSet, channel: Channel) -> np.ndarray:
    """Density per unit coth factor: value = occupation.total * kernel."""
    plate = channel.source_plate
    lateral = channel is not Channel.SIGMA1_XX and channel is not Channel.SIGMA2_XX
    kin = np.real(refl.kin_p) ** 2 + np.real(refl.kin_v)
    weight = kin / np.abs(refl.denominator) ** 2
    decay = np.abs(refl.phase)
    evanescent = _evanescent_bracket(refl, plate, lateral=lateral) * decay * weight
    propagating = _propagating_bracket(refl, plate, lateral=lateral) * weight

    abs_w = np.abs(ctx.w)
    if channel in (Channel.SIGMA1_XX, Channel.SIGMA2_XX):
        evanescent = evanescent * abs_w
        propagating = -propagating * abs_w
    elif channel is Channel.SIGMA1_XY:
        evanescent = -evanescent * ctx.u
        propagating = -propagating * ctx.u
    elif channel is Channel.POYNTING1_X:
        evanescent = evanescent * ctx.omega
        propagating = propagating * ctx.omega
    elif channel is Channel.SIGMA2_XY:
        evanescent = evanescent * ctx.u
        propagating = propagating * ctx.u
    elif channel is Channel.POYNTING2_X:
        omega_p = np.real(ctx.omega_prime)
        evanescent = -evanescent * omega_p
        propagating = -propagating * omega_p
    else:
        raise ValueError(f"Unknown channel: {channel}")
    kernel = np.where(ctx.region == Region.PROPAGATING, propagating, evanescent)
    return PLATE_PREFACTOR * kernel


def _require_real_axis(ctx: WaveContext, channel: Channel) -> None:
    if not ctx.on_real_axis:
        raise ValueError(f"{channel.value} density needs a real-frequency context")


def density_plate1(
    ctx: WaveContext, refl: ReflectionSet, channel: Channel, t1: float
) -> DensitySample:
    channel = Channel(channel)
    if channel not in PLATE1_CHANNELS:
        raise ValueError(f"Unknown channel: {channel}")
    _require_real_axis(ctx, channel)
    kernel = _kernel(ctx, refl, channel)
    occ = occupation(ctx.omega, t1)
    quantum = occ.quantum * kernel
    thermal = occ.thermal * kernel
    return DensitySample(quantum + thermal, quantum, thermal, ctx.region, channel)


def density_plate2(
    ctx: WaveContext, refl: ReflectionSet, channel: Channel, t2: float
) -> DensitySample:
    """Plate-2 densities in lab variables.

    The quantum factor is sgn(omega) = 1; the thermal factor is
    2*sgn(omega')*n(|omega'|, T2), negative in the anomalous wedge.
    ``POYNTING2_X`` is the flux S'2x in the frame co-moving with plate 2, so
    its whole occupation factor is coth(omega'/2T2).
    """
    channel = Channel(channel)
    if channel not in PLATE2_CHANNELS:
        raise ValueError(f"Unknown channel: {channel}")
    _require_real_axis(ctx, channel)
    kernel = _kernel(ctx, refl, channel)
    occ = occupation(np.real(ctx.omega_prime), t2)
    quantum = occ.quantum * kernel if channel is Channel.POYNTING2_X else kernel.copy()
    thermal = occ.thermal * kernel
    return DensitySample(quantum + thermal, quantum, thermal, ctx.region, channel)


def density_lateral(
    ctx: WaveContext, refl: ReflectionSet, t1: float, t2: float
) -> DensitySample:
    """Combined lateral density; purely thermal and equal to sigma1_xy + sigma2_xy."""
    _require_real_axis(ctx, Channel.LATERAL)
    n1 = occupation(ctx.omega, t1).thermal / 2
    n2 = occupation(np.real(ctx.omega_prime), t2).thermal / 2
    weight = (np.real(refl.kin_p) ** 2 + np.real(refl.kin_v)) / np.abs(refl.denominator) ** 2
    evanescent = _evanescent_bracket(refl, 1, lateral=True) * np.abs(refl.phase)
    propagating = _propagating_bracket(refl, 1, lateral=True)
    bracket = np.where(ctx.region == Region.PROPAGATING, propagating, evanescent)
    value = LATERAL_PREFACTOR * (n2 - n1) * ctx.u * weight * bracket
    return DensitySample(value, np.zeros_like(value), value, ctx.region, Channel.LATERAL)


def _qvac_ratio(refl: ReflectionSet) -> np.ndarray:
    p2 = refl.kin_p**2
    numerator = p2 * (refl.r_b1 * refl.r_b2 * refl.a_ee + refl.r_e1 * refl.r_e2 * refl.a_bb) + (
        refl.r_b1 * refl.r_e2 * refl.a_eb + refl.r_e1 * refl.r_b2 * refl.a_be
    ) * refl.kin_v
    return refl.phase * numerator / refl.denominator


def density_qvac_imag(ctx: WaveContext, refl: ReflectionSet) -> DensitySample:
    """Quantum-vacuum sigma_xx integrand at omega = i*kappa.

    Written with exp(2iwa) r r products in the numerator so that vanishing
    reflection coefficients stay regular.
    """
    if ctx.on_real_axis:
        raise ValueError("qvac_imag density needs an imaginary-axis context")
    big_w = np.imag(ctx.w)
    value = QVAC_PREFACTOR * np.real(big_w * _qvac_ratio(refl))
    return DensitySample(value, value.copy(), np.zeros_like(value), ctx.region, Channel.QVAC_IMAG)


def density_qvac_real(ctx: WaveContext, refl: ReflectionSet) -> DensitySample:
    """Regularized real-frequency form of sigma_xx(0, 0); the bare integral of w is dropped."""
    _require_real_axis(ctx, Channel.QVAC_REAL)
    value = -QVAC_PREFACTOR * np.real(ctx.w * _qvac_ratio(refl))
    return DensitySample(value, value.copy(), np.zeros_like(value), ctx.region, Channel.QVAC_REAL)


_DISPATCH: dict[Channel, Callable[[WaveContext, ReflectionSet, float, float], DensitySample]] = {
    Channel.SIGMA1_XX: lambda c, r, t1, t2: density_plate1(c, r, Channel.SIGMA1_XX, t1),
    Channel.SIGMA1_XY: lambda c, r, t1, t2: density_plate1(c, r, Channel.SIGMA1_XY, t1),
    Channel.POYNTING1_X: lambda c, r, t1, t2: density_plate1(c, r, Channel.POYNTING1_X, t1),
    Channel.SIGMA2_XX: lambda c, r, t1, t2: density_plate2(c, r, Channel.SIGMA2_XX, t2),
    Channel.SIGMA2_XY: lambda c, r, t1, t2: density_plate2(c, r, Channel.SIGMA2_XY, t2),
    Channel.POYNTING2_X: lambda c, r, t1, t2: density_plate2(c, r, Channel.POYNTING2_X, t2),
    Channel.LATERAL: lambda c, r, t1, t2: density_lateral(c, r, t1, t2),
    Channel.QVAC_IMAG: lambda c, r, t1, t2: density_qvac_imag(c, r),
    Channel.QVAC_REAL: lambda c, r, t1, t2: density_qvac_real(c, r),
}


def evaluate_density(
    channel: Channel | str,
    ctx: WaveContext,
    refl: ReflectionSet,
    *,
    t1: float = 0.0,
    t2: float = 0.0,
) -> DensitySample:
    try:
        handler = _DISPATCH[Channel(channel)]
    except ValueError:
        raise ValueError(f"Unknown channel: {channel}") from None
    return handler(ctx, refl, t1, t2)


def sample_density(
    channel: Channel | str,
    cavity: Cavity,
    frequency: Any,
    u: Any,
    v: Any,
) -> DensitySample:
    """Density of ``channel`` for a reduced-unit cavity.

    ``frequency`` is the lab omega, or kappa for the imaginary-axis channel.
    """
    channel = Channel(channel)
    if channel.on_imaginary_axis:
        ctx = build_imaginary_context(frequency, u, v, cavity.beta)
    else:
        ctx = build_context(frequency, u, v, cavity.beta)
    refl = reflect(ctx, cavity.medium1, cavity.medium2)
    return evaluate_density(channel, ctx, refl, t1=cavity.t1, t2=cavity.t2)

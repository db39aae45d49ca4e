from __future__ import annotations

from dataclasses import dataclass
from typing import Any

import numpy as np

from casimove._constants import RESONANCE_FLOOR
from casimove.exceptions import CavityResonanceError, ReflectionPoleError
from casimove.kinematics import WaveContext, _medium_wavenumber_sq, medium_wavenumber
from casimove.material import Medium


@dataclass(frozen=True)
class ReflectionSet:
    """Fresnel coefficients, cavity factors and the shared denominator for a context.

    ``phase`` is the round-trip factor exp(2iwa); ``kin_p`` and ``kin_v`` are
    the kinematic weights (s**2 - u*beta*omega) and v**2*beta**2*w**2.
    """

    r_e1: np.ndarray
    r_b1: np.ndarray
    r_e2: np.ndarray
    r_b2: np.ndarray
    t_e: np.ndarray
    t_b: np.ndarray
    a_ee: np.ndarray
    a_bb: np.ndarray
    a_eb: np.ndarray
    a_be: np.ndarray
    denominator: np.ndarray
    phase: np.ndarray
    kin_p: np.ndarray
    kin_v: np.ndarray


def _fresnel(eps: Any, mu: Any, w: Any, w_medium: Any, plate: str) -> tuple[np.ndarray, np.ndarray]:
    den_e = mu * w + w_medium
    den_b = eps * w + w_medium
    if np.any(np.abs(den_e) < RESONANCE_FLOOR) or np.any(np.abs(den_b) < RESONANCE_FLOOR):
        raise ReflectionPoleError(plate, "Fresnel denominator vanishes")
    return (mu * w - w_medium) / den_e, -(eps * w - w_medium) / den_b


def fresnel_plate1(
    ctx: WaveContext, medium: Medium
) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """(rE1, rB1, tE, tB) of plate 1 in the lab frame."""
    shape = ctx.shape
    if medium.is_vacuum:
        zero = np.zeros(shape, dtype=complex)
        return zero, zero.copy(), np.ones(shape, dtype=complex), np.ones(shape, dtype=complex)
    if medium.is_perfect_mirror:
        minus_one = np.full(shape, -1.0 + 0j)
        zero = np.zeros(shape, dtype=complex)
        return minus_one, minus_one.copy(), zero, zero.copy()
    eps, mu = medium.response(ctx.omega)
    w1 = medium_wavenumber(eps, mu, ctx.omega, ctx.s)
    r_e, r_b = _fresnel(eps, mu, ctx.w, w1, "plate1")
    t_e = 1.0 - r_e
    t_b = np.sqrt(np.asarray(eps / mu, dtype=complex)) * (1.0 + r_b)
    return (
        np.broadcast_to(r_e, shape).astype(complex),
        np.broadcast_to(r_b, shape).astype(complex),
        np.broadcast_to(t_e, shape).astype(complex),
        np.broadcast_to(t_b, shape).astype(complex),
    )


def fresnel_plate2(ctx: WaveContext, medium: Medium) -> tuple[np.ndarray, np.ndarray]:
    """(rE2, rB2) evaluated in the frame co-moving with plate 2.

    For real omega' < 0 the coefficients are the complex conjugates of those
    at |omega'|.
    """
    shape = ctx.shape
    if medium.is_vacuum:
        return np.zeros(shape, dtype=complex), np.zeros(shape, dtype=complex)
    if medium.is_perfect_mirror:
        return np.full(shape, -1.0 + 0j), np.full(shape, -1.0 + 0j)
    omega_p = np.asarray(ctx.omega_prime, dtype=complex)
    flipped = (omega_p.imag == 0) & (omega_p.real < 0)
    omega_eval = np.where(flipped, -omega_p, omega_p)
    eps, mu = medium.response(omega_eval)
    w2 = _medium_wavenumber_sq(eps * mu, omega_eval, ctx.s_prime_sq)
    r_e, r_b = _fresnel(eps, mu, ctx.w, w2, "plate2")
    r_e = np.where(flipped, r_e.conj(), r_e)
    r_b = np.where(flipped, r_b.conj(), r_b)
    return np.broadcast_to(r_e, shape).astype(complex), np.broadcast_to(r_b, shape).astype(complex)


def kinematic_weights(ctx: WaveContext) -> tuple[np.ndarray, np.ndarray]:
    """(s**2 - u*beta*omega, v**2*beta**2*w**2) for the cavity denominator."""
    b = ctx.beta
    kin_p = ctx.s**2 - ctx.u * b * ctx.omega
    kin_v = ctx.v**2 * b**2 * ctx.w_sq
    return kin_p, kin_v


def cavity_factors(
    ctx: WaveContext,
    r_e1: Any,
    r_b1: Any,
    r_e2: Any,
    r_b2: Any,
    *,
    gap: float = 1.0,
) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """(aEE, aBB, aEB, aBE, D, exp(2iwa)) with aXY = 1 - exp(2iwa) rX1 rY2."""
    phase = np.exp(2j * ctx.w * gap)
    a_ee = 1.0 - phase * r_e1 * r_e2
    a_bb = 1.0 - phase * r_b1 * r_b2
    a_eb = 1.0 - phase * r_e1 * r_b2
    a_be = 1.0 - phase * r_b1 * r_e2
    kin_p, kin_v = kinematic_weights(ctx)
    denominator = kin_p**2 * a_ee * a_bb + a_eb * a_be * kin_v
    small = np.abs(denominator) < RESONANCE_FLOOR
    if np.any(small):
        index = tuple(int(i[0]) for i in np.nonzero(small)) if ctx.shape else ()
        raise CavityResonanceError("cavity denominator vanishes", ctx.point(index))
    return a_ee, a_bb, a_eb, a_be, denominator, phase


def reflect(ctx: WaveContext, medium1: Medium, medium2: Medium, *, gap: float = 1.0) -> ReflectionSet:
    r_e1, r_b1, t_e, t_b = fresnel_plate1(ctx, medium1)
    r_e2, r_b2 = fresnel_plate2(ctx, medium2)
    a_ee, a_bb, a_eb, a_be, denominator, phase = cavity_factors(
        ctx, r_e1, r_b1, r_e2, r_b2, gap=gap
    )
    kin_p, kin_v = kinematic_weights(ctx)
    return ReflectionSet(
        r_e1=r_e1,
        r_b1=r_b1,
        r_e2=r_e2,
        r_b2=r_b2,
        t_e=t_e,
        t_b=t_b,
        a_ee=a_ee,
        a_bb=a_bb,
        a_eb=a_eb,
        a_be=a_be,
        denominator=denominator,
        phase=phase,
        kin_p=kin_p,
        kin_v=kin_v,
    )

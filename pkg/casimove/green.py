from __future__ import annotations

from dataclasses import dataclass
from typing import Any

import numpy as np

from casimove._constants import RESONANCE_FLOOR
from casimove.exceptions import CavityResonanceError
from casimove.kinematics import (
    PolarizationBasis,
    WaveContext,
    medium_wavenumber,
    overlaps,
    polarization_basis,
)
from casimove.material import Medium
from casimove.reflection import ReflectionSet, reflect


def _dyad(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return np.einsum("...i,...j->...ij", a, b)


def _scalar(x: Any) -> np.ndarray:
    return np.asarray(x)[..., np.newaxis, np.newaxis]


@dataclass(frozen=True)
class CavityOperators:
    t: np.ndarray
    r1: np.ndarray
    r2: np.ndarray
    basis: PolarizationBasis
    reflection: ReflectionSet
    w1: np.ndarray
    mu1: np.ndarray
    eps1: np.ndarray


@dataclass(frozen=True)
class CavityExpansion:
    """Closed-form expansion of (1 - exp(2iwa) R1 R2)^-1 = 1 + M and R2 (1 + M) = N."""

    overlap_lambda: np.ndarray
    overlap_nu: np.ndarray
    rho: np.ndarray
    c_ee: np.ndarray
    c_bb: np.ndarray
    c_eb: np.ndarray
    c_be: np.ndarray
    d_ee: np.ndarray
    d_bb: np.ndarray
    d_eb: np.ndarray
    d_be: np.ndarray
    m: np.ndarray
    n: np.ndarray
    phase: np.ndarray
    operators: CavityOperators


def build_operators(
    ctx: WaveContext,
    medium1: Medium,
    medium2: Medium,
    *,
    reflection: ReflectionSet | None = None,
    gap: float = 1.0,
) -> CavityOperators:
    """Transmission operator T of plate 1 and reflection operators R1, R2.

    ``reflection`` lets callers supply arbitrary coefficients; only its r/t
    entries are used here.
    """
    refl = reflection if reflection is not None else reflect(ctx, medium1, medium2, gap=gap)
    if medium1.is_vacuum or medium1.is_perfect_mirror:
        eps1 = np.ones(ctx.shape, dtype=complex)
        mu1 = np.ones(ctx.shape, dtype=complex)
    else:
        eps1, mu1 = (np.broadcast_to(x, ctx.shape) for x in medium1.response(ctx.omega))
    w1 = medium_wavenumber(eps1, mu1, ctx.omega, ctx.s)
    basis = polarization_basis(ctx, w1=w1, index1=np.sqrt(eps1 * mu1 + 0j))
    t = _scalar(refl.t_e) * _dyad(basis.n_e1, basis.n_e1) - _scalar(refl.t_b) * _dyad(
        basis.n_b1p, basis.n_bm1
    )
    r1 = _scalar(refl.r_e1) * _dyad(basis.n_e1, basis.n_e1) + _scalar(refl.r_b1) * _dyad(
        basis.n_b1p, basis.n_b1m
    )
    r2 = _scalar(refl.r_e2) * _dyad(basis.n_e2m, basis.n_e2p) + _scalar(refl.r_b2) * _dyad(
        basis.n_b2m, basis.n_b2p
    )
    return CavityOperators(t, r1, r2, basis, refl, np.asarray(w1), np.asarray(mu1), np.asarray(eps1))


def expand_inverse(ctx: WaveContext, operators: CavityOperators, *, gap: float = 1.0) -> CavityExpansion:
    refl = operators.reflection
    basis = operators.basis
    r_e1, r_b1, r_e2, r_b2 = refl.r_e1, refl.r_b1, refl.r_e2, refl.r_b2
    lam, nu = overlaps(ctx)
    lam2, nu2 = lam * lam, nu * nu
    x = np.exp(2j * ctx.w * gap)
    four = r_e1 * r_e2 * r_b1 * r_b2
    inverse_rho = (
        1.0
        + x * x * four
        - x * (r_e1 * r_e2 * lam2 + r_b1 * r_b2 * lam2 + r_e2 * r_b1 * nu2 + r_e1 * r_b2 * nu2)
    )
    small = np.abs(inverse_rho) < RESONANCE_FLOOR
    if np.any(small):
        index = tuple(int(i[0]) for i in np.nonzero(small)) if ctx.shape else ()
        raise CavityResonanceError("multiple-reflection series diverges", ctx.point(index))
    rho = 1.0 / inverse_rho

    # d-coefficients carry no 1/r factor: dXY = cXY / (exp(2iwa) rX1) without the division.
    d_ee = rho * (r_e2 * lam2 + r_b2 * nu2 - x * r_e2 * r_b1 * r_b2)
    d_bb = rho * (r_b2 * lam2 + r_e2 * nu2 - x * r_b2 * r_e1 * r_e2)
    d_eb = rho * (r_e2 - r_b2) * lam * nu
    d_be = d_eb
    c_ee = x * r_e1 * d_ee
    c_bb = x * r_b1 * d_bb
    c_eb = x * r_e1 * d_eb
    c_be = x * r_b1 * d_be

    e1, e2, f2 = basis.n_e1, basis.n_b1p, basis.n_b1m
    m = (
        _scalar(c_ee) * _dyad(e1, e1)
        + _scalar(c_bb) * _dyad(e2, e2)
        + _scalar(c_eb) * _dyad(e1, e2)
        + _scalar(c_be) * _dyad(e2, e1)
    )
    n = (
        _scalar(d_ee) * _dyad(e1, e1)
        + _scalar(d_bb) * _dyad(f2, e2)
        + _scalar(d_eb) * _dyad(e1, e2)
        + _scalar(d_be) * _dyad(f2, e1)
    )
    return CavityExpansion(
        overlap_lambda=lam,
        overlap_nu=nu,
        rho=rho,
        c_ee=c_ee,
        c_bb=c_bb,
        c_eb=c_eb,
        c_be=c_be,
        d_ee=d_ee,
        d_bb=d_bb,
        d_eb=d_eb,
        d_be=d_be,
        m=m,
        n=n,
        phase=x,
        operators=operators,
    )


def green_tensor(
    x: float,
    x_source: float,
    ctx: WaveContext,
    expansion: CavityExpansion,
    *,
    gap: float = 1.0,
) -> np.ndarray:
    """Green tensor for a field point 0 < x < a in the gap and a source x_source < 0 in plate 1."""
    if not 0.0 < x < gap:
        raise ValueError(f"field point must lie inside the gap, got x={x}")
    if x_source >= 0.0:
        raise ValueError(f"source must lie inside plate 1, got x_source={x_source}")
    ops = expansion.operators
    w, w1 = ctx.w, ops.w1
    forward = np.exp(1j * w * x - 1j * w1 * x_source)
    backward = np.exp(-1j * w * (x - 2 * gap) - 1j * w1 * x_source)
    t = ops.t
    body = _scalar(forward) * (t + expansion.m @ t) + _scalar(backward) * (expansion.n @ t)
    return body * _scalar(ops.mu1 / (2 * w1))


def direct_green_tensor(
    x: float,
    x_source: float,
    ctx: WaveContext,
    operators: CavityOperators,
    *,
    gap: float = 1.0,
) -> np.ndarray:
    """Superposition form with an explicit 3x3 inverse and the transmitted source tensor."""
    w, w1 = ctx.w, operators.w1
    eps1, mu1 = operators.eps1, operators.mu1
    omega = ctx.omega
    identity = np.broadcast_to(np.eye(3, dtype=complex), operators.r1.shape)
    phase = _scalar(np.exp(2j * w * gap))
    inverse = np.linalg.inv(identity - phase * (operators.r1 @ operators.r2))
    propagate = _scalar(np.exp(1j * w * x)) * identity + _scalar(
        np.exp(-1j * w * (x - gap)) * np.exp(1j * w * gap)
    ) * operators.r2
    k1 = np.stack(np.broadcast_arrays(w1, ctx.u + 0j, ctx.v + 0j), axis=-1)
    source = (_dyad(k1, k1) + _scalar(eps1 * mu1 * omega**2) * identity) / _scalar(
        2 * eps1 * omega**2 * w1
    )
    return propagate @ inverse @ (_scalar(np.exp(-1j * w1 * x_source)) * operators.t) @ source

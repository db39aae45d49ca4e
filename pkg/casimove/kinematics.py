from __future__ import annotations

from dataclasses import dataclass
from enum import IntEnum
from typing import Any

import numpy as np

from casimove.exceptions import DegenerateBasisError, KinematicDomainError


class Region(IntEnum):
    PROPAGATING = 0
    EVANESCENT = 1
    ANOMALOUS_EVANESCENT = 2
    IMAGINARY_AXIS = 3


@dataclass(frozen=True)
class WaveContext:
    """Kinematics of one or many (omega, u, v) samples in the gap (reduced units).

    Array fields share one broadcast shape. ``omega`` is real for lab-frame
    samples and purely imaginary for contexts on the rotated contour.
    """

    omega: np.ndarray
    u: np.ndarray
    v: np.ndarray
    beta: float
    gamma: float
    s: np.ndarray
    w: np.ndarray
    w_sq: np.ndarray
    omega_prime: np.ndarray
    u_prime: np.ndarray
    s_prime_sq: np.ndarray
    region: np.ndarray

    @property
    def shape(self) -> tuple[int, ...]:
        return self.s.shape

    @property
    def s_prime(self) -> np.ndarray:
        return branch_sqrt(self.s_prime_sq)

    @property
    def on_real_axis(self) -> bool:
        return not bool(np.any(self.region == Region.IMAGINARY_AXIS))

    def point(self, index: Any = ()) -> tuple[complex, float, float]:
        omega = complex(self.omega[index])
        return (omega.real if omega.imag == 0 else omega), float(self.u[index]), float(self.v[index])


def branch_sqrt(z: Any) -> np.ndarray:
    """Square root on the branch Im >= 0 (outgoing or decaying waves)."""
    root = np.sqrt(np.asarray(z, dtype=complex))
    return np.where(root.imag < 0, -root, root)


def lorentz_factor(beta: float) -> float:
    if not -1.0 < beta < 1.0:
        raise KinematicDomainError(f"velocity fraction must satisfy |beta| < 1, got {beta}")
    return 1.0 / np.sqrt((1.0 - beta) * (1.0 + beta))


def gap_wavenumber(omega: Any, s: Any) -> np.ndarray:
    omega = np.asarray(omega)
    s = np.asarray(s, dtype=float)
    if np.isrealobj(omega):
        return branch_sqrt((omega - s) * (omega + s))
    return branch_sqrt(omega * omega - s * s)


def medium_wavenumber(eps: Any, mu: Any, omega: Any, s: Any) -> np.ndarray:
    """Complex wavenumber w1 = sqrt(eps*mu*omega**2 - s**2) with Im(w1) >= 0.

    On the imaginary axis omega = i*kappa the value returned is the complex
    i*sqrt(eps*mu*kappa**2 + s**2), not its modulus.
    """
    s = np.asarray(s)
    return _medium_wavenumber_sq(np.asarray(eps) * np.asarray(mu), omega, s * s)


def _medium_wavenumber_sq(eps_mu: Any, omega: Any, s_sq: Any) -> np.ndarray:
    omega = np.asarray(omega, dtype=complex)
    return branch_sqrt(eps_mu * omega * omega - s_sq)


def build_context(omega: Any, u: Any, v: Any, beta: float) -> WaveContext:
    gamma = lorentz_factor(beta)
    omega_arr, u_arr, v_arr = np.broadcast_arrays(
        np.asarray(omega, dtype=float), np.asarray(u, dtype=float), np.asarray(v, dtype=float)
    )
    if np.any(~(omega_arr > 0)):
        raise KinematicDomainError("lab-frame samples need omega > 0")
    s = np.hypot(u_arr, v_arr)
    w_sq = (omega_arr - s) * (omega_arr + s)
    w = branch_sqrt(w_sq)
    omega_prime = gamma * (omega_arr - beta * u_arr)
    u_prime = gamma * (u_arr - beta * omega_arr)
    region = np.where(
        omega_arr > s,
        Region.PROPAGATING,
        np.where(omega_arr < beta * u_arr, Region.ANOMALOUS_EVANESCENT, Region.EVANESCENT),
    ).astype(int)
    return WaveContext(
        omega=omega_arr,
        u=u_arr,
        v=v_arr,
        beta=float(beta),
        gamma=float(gamma),
        s=s,
        w=w,
        w_sq=w_sq,
        omega_prime=omega_prime,
        u_prime=u_prime,
        s_prime_sq=u_prime * u_prime + v_arr * v_arr,
        region=region,
    )


def build_imaginary_context(kappa: Any, u: Any, v: Any, beta: float) -> WaveContext:
    """Context at omega = i*kappa on the rotated frequency contour."""
    gamma = lorentz_factor(beta)
    kappa_arr, u_arr, v_arr = np.broadcast_arrays(
        np.asarray(kappa, dtype=float), np.asarray(u, dtype=float), np.asarray(v, dtype=float)
    )
    if np.any(~(kappa_arr > 0)):
        raise KinematicDomainError("imaginary-axis samples need kappa > 0")
    omega = 1j * kappa_arr
    s = np.hypot(u_arr, v_arr)
    w_sq = -(kappa_arr * kappa_arr + s * s) + 0j
    w = 1j * np.sqrt(kappa_arr * kappa_arr + s * s)
    omega_prime = gamma * (omega - beta * u_arr)
    u_prime = gamma * (u_arr - beta * omega)
    return WaveContext(
        omega=omega,
        u=u_arr,
        v=v_arr,
        beta=float(beta),
        gamma=float(gamma),
        s=s,
        w=w,
        w_sq=w_sq,
        omega_prime=omega_prime,
        u_prime=u_prime,
        s_prime_sq=u_prime * u_prime + v_arr * v_arr,
        region=np.full(s.shape, int(Region.IMAGINARY_AXIS)),
    )


def frame_radicand(ctx: WaveContext) -> np.ndarray:
    """s**2 - 2*beta*omega*u - beta**2*(v**2 - omega**2), equal to s'**2 / gamma**2."""
    b = ctx.beta
    return ctx.s**2 - 2 * b * ctx.omega * ctx.u - b**2 * (ctx.v**2 - ctx.omega**2)


@dataclass(frozen=True)
class PolarizationBasis:
    """TE/TM directions; each field has shape ``ctx.shape + (3,)``.

    Suffix ``p``/``m`` marks right-/left-moving waves in the gap; ``n_bm1``
    is the TM direction of the wave transmitted into plate 1.
    """

    n_e1: np.ndarray
    n_b1p: np.ndarray
    n_b1m: np.ndarray
    n_bm1: np.ndarray
    n_e2p: np.ndarray
    n_e2m: np.ndarray
    n_b2p: np.ndarray
    n_b2m: np.ndarray


def polarization_basis(
    ctx: WaveContext,
    *,
    w1: Any = None,
    index1: Any = 1.0,
) -> PolarizationBasis:
    """Polarization vectors of the cavity problem.

    ``w1`` and ``index1`` = sqrt(eps1*mu1) describe the wave inside plate 1;
    they default to vacuum values.
    """
    s, u, v, w, omega, b = ctx.s, ctx.u, ctx.v, ctx.w, ctx.omega, ctx.beta
    if np.any(s == 0):
        raise DegenerateBasisError("normal incidence (s = 0) has no transverse basis")
    radicand = frame_radicand(ctx)
    if np.any(np.real(radicand) <= 0):
        raise DegenerateBasisError("non-positive frame radicand for the plate-2 basis")
    if w1 is None:
        w1 = w
    w1 = np.asarray(w1, dtype=complex)
    index1 = np.asarray(index1, dtype=complex)
    root = np.sqrt(radicand + 0j)
    zero = np.zeros_like(s)

    def stack(x: Any, y: Any, z: Any) -> np.ndarray:
        x, y, z = np.broadcast_arrays(x, y, z)
        return np.stack([x, y, z], axis=-1).astype(complex)

    n_e1 = stack(zero, -v / s, u / s)
    scale_b = omega * s
    n_b1p = stack(s**2 / scale_b, -u * w / scale_b, -v * w / scale_b)
    n_b1m = stack(-(s**2) / scale_b, -u * w / scale_b, -v * w / scale_b)
    scale_bm = index1 * omega * s
    n_bm1 = stack(-(s**2) / scale_bm, u * w1 / scale_bm, v * w1 / scale_bm)
    scale_2 = omega * root
    e_y = v * (b * u - omega) / scale_2
    e_z = (omega * u + b * (v**2 - omega**2)) / scale_2
    n_e2p = stack(b * v * w / scale_2, e_y, e_z)
    n_e2m = stack(-b * v * w / scale_2, e_y, e_z)
    b_x = (b * omega * u - s**2) / scale_2
    n_b2p = stack(b_x, w * (u - b * omega) / scale_2, w * v / scale_2)
    n_b2m = stack(-b_x, w * (u - b * omega) / scale_2, w * v / scale_2)
    return PolarizationBasis(n_e1, n_b1p, n_b1m, n_bm1, n_e2p, n_e2m, n_b2p, n_b2m)


def overlaps(ctx: WaveContext) -> tuple[np.ndarray, np.ndarray]:
    """(lambda, nu) = (nE1 . nE2+, nB1+ . nE2+) between the plate-1 and plate-2 bases."""
    root = ctx.s * np.sqrt(frame_radicand(ctx) + 0j)
    lam = (ctx.s**2 - ctx.u * ctx.beta * ctx.omega) / root
    nu = ctx.beta * ctx.v * ctx.w / root
    return lam, nu

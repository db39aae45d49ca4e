from __future__ import annotations

import logging
from collections.abc import Callable
from dataclasses import dataclass, replace

import numpy as np

from casimove.green import (
    CavityExpansion,
    CavityOperators,
    build_operators,
    direct_green_tensor,
    expand_inverse,
    green_tensor,
)
from casimove.kinematics import WaveContext, build_context, medium_wavenumber, overlaps
from casimove.material import DispersionModel, Medium, ModelKind, Response, evaluate
from casimove.reflection import reflect
from casimove.spectral import Channel, density_lateral, density_plate1, density_plate2, occupation

logger = logging.getLogger("casimove")

MATRIX_TOL = 1e-11
SCALAR_TOL = 1e-12


@dataclass(frozen=True)
class IdentityCheck:
    name: str
    description: str
    tolerance: float
    max_deviation: float
    samples: int

    @property
    def passed(self) -> bool:
        return bool(np.isfinite(self.max_deviation)) and self.max_deviation <= self.tolerance


CheckFn = Callable[[np.random.Generator, int], np.ndarray]


# --- Sampling helpers ---


def _random_medium(rng: np.random.Generator) -> Medium:
    if rng.random() < 0.5:
        eps = DispersionModel(
            ModelKind.DRUDE,
            {"plasma": rng.uniform(0.5, 8.0), "damping": rng.uniform(0.01, 1.0), "background": rng.uniform(1.0, 3.0)},
        )
    else:
        eps = DispersionModel(
            ModelKind.LORENTZ,
            {
                "strength": rng.uniform(0.1, 5.0),
                "resonance": rng.uniform(0.2, 4.0),
                "damping": rng.uniform(0.01, 1.0),
                "background": rng.uniform(1.0, 2.0),
            },
        )
    if rng.random() < 0.3:
        mu = DispersionModel(
            ModelKind.CONSTANT,
            {"value": rng.uniform(1.0, 2.0), "loss": rng.uniform(0.0, 0.3)},
            Response.PERMEABILITY,
        )
        return Medium(eps, mu)
    return Medium(eps)


def _random_context(rng: np.random.Generator, n: int, *, propagating: bool | None = None) -> WaveContext:
    beta = float(rng.uniform(-0.8, 0.8))
    omega = rng.uniform(0.05, 5.0, n)
    if propagating is None:
        s = rng.uniform(0.05, 2.0, n) * omega
    elif propagating:
        s = rng.uniform(0.05, 0.95, n) * omega
    else:
        s = rng.uniform(1.05, 3.0, n) * omega
    phi = rng.uniform(0.0, 2.0 * np.pi, n)
    ctx = build_context(omega, s * np.cos(phi), s * np.sin(phi), beta)
    # keep clear of s' = 0, where the plate-2 frame degenerates
    keep = np.sqrt(np.real(ctx.s_prime_sq)) > 0.05 * omega
    if not np.all(keep):
        ctx = build_context(omega[keep], ctx.u[keep], ctx.v[keep], beta)
    return ctx


def _chunks(rng: np.random.Generator, n: int, *, parts: int = 8) -> list[tuple[Medium, Medium, int]]:
    sizes = [n // parts + (1 if i < n % parts else 0) for i in range(parts)]
    return [(_random_medium(rng), _random_medium(rng), size) for size in sizes if size > 0]


def _scaled(diff: np.ndarray, *scales: np.ndarray) -> np.ndarray:
    scale = np.maximum.reduce([np.ones_like(np.abs(diff))] + [np.abs(s) for s in scales])
    return np.abs(diff) / scale


# --- Material identities ---


def _material_samples(rng: np.random.Generator, n: int) -> tuple[np.ndarray, ...]:
    omega = rng.uniform(0.05, 5.0, n)
    s = rng.uniform(0.0, 3.0, n) * omega
    eps = rng.uniform(-20.0, 20.0, n) + 1j * rng.uniform(1e-3, 20.0, n)
    mu = rng.uniform(0.5, 3.0, n) + 1j * rng.uniform(0.0, 1.0, n)
    w1 = medium_wavenumber(eps, mu, omega, s)
    return omega, s, eps, mu, w1


def check_im_permittivity(rng: np.random.Generator, n: int) -> np.ndarray:
    omega, s, eps, mu, w1 = _material_samples(rng, n)
    re, im = w1.real, w1.imag
    rhs = (2 * mu.real * re * im - mu.imag * (re**2 - im**2 + s**2)) / (omega**2 * np.abs(mu) ** 2)
    scale = (np.abs(w1) ** 2 + s**2) / (omega**2 * np.abs(mu))
    return _scaled(eps.imag - rhs, scale)


def check_re_response_product(rng: np.random.Generator, n: int) -> np.ndarray:
    omega, s, eps, mu, w1 = _material_samples(rng, n)
    lhs = np.real(np.conj(eps) * np.conj(mu) * w1)
    rhs = w1.real * (np.abs(w1) ** 2 + s**2) / omega**2
    return _scaled(lhs - rhs, np.abs(w1) * (np.abs(w1) ** 2 + s**2) / omega**2)


def check_im_response_product(rng: np.random.Generator, n: int) -> np.ndarray:
    omega, s, eps, mu, w1 = _material_samples(rng, n)
    lhs = np.imag(np.conj(eps) * np.conj(mu) * w1)
    rhs = -w1.imag * (np.abs(w1) ** 2 - s**2) / omega**2
    return _scaled(lhs - rhs, np.abs(w1) * (np.abs(w1) ** 2 + s**2) / omega**2)


def check_conjugate_symmetry(rng: np.random.Generator, n: int) -> np.ndarray:
    deviations = []
    for medium, _, size in _chunks(rng, n):
        omega = rng.uniform(0.01, 10.0, size)
        plus = evaluate(medium.epsilon, omega)
        minus = evaluate(medium.epsilon, -omega)
        deviations.append(np.abs(minus - np.conj(plus)))
    return np.concatenate(deviations)


# --- Cavity-factor identities ---


def _random_reflections(rng: np.random.Generator, n: int) -> list[np.ndarray]:
    radius = np.sqrt(rng.uniform(0.0, 1.0, (4, n)))
    angle = rng.uniform(0.0, 2.0 * np.pi, (4, n))
    return list(radius * np.exp(1j * angle))


def check_real_w_identity(rng: np.random.Generator, n: int) -> np.ndarray:
    r1, r2, _, _ = _random_reflections(rng, n)
    x = np.exp(1j * rng.uniform(0.0, 2.0 * np.pi, n))
    a = 1.0 - x * r1 * r2
    lhs = np.real(x * r1 * r2 * np.conj(a)) + 0.5 * np.abs(a) ** 2
    return np.abs(lhs - 0.5 * (1.0 - np.abs(r1 * r2) ** 2))


def check_imaginary_w_identity(rng: np.random.Generator, n: int) -> np.ndarray:
    r1, r2, _, _ = _random_reflections(rng, n)
    x = np.exp(-2.0 * rng.uniform(0.0, 5.0, n))
    a = 1.0 - x * r1 * r2
    return np.abs(np.imag(x * r1 * r2 * np.conj(a)) - x * np.imag(r1 * r2))


def _longid_lhs(x: np.ndarray, re1: np.ndarray, rb1: np.ndarray, re2: np.ndarray, rb2: np.ndarray) -> np.ndarray:
    a_ee, a_bb = 1 - x * re1 * re2, 1 - x * rb1 * rb2
    a_eb, a_be = 1 - x * re1 * rb2, 1 - x * rb1 * re2
    c = np.conj
    return (
        (x * re1 * re2 * c(a_ee) + 0.5 * abs(a_ee) ** 2) * abs(a_bb) ** 2
        + (x * re1 * rb2 * c(a_eb) + 0.5 * abs(a_eb) ** 2) * abs(a_be) ** 2
        + (x * rb1 * rb2 * c(a_bb) + 0.5 * abs(a_bb) ** 2) * abs(a_ee) ** 2
        + (x * rb1 * re2 * c(a_be) + 0.5 * abs(a_be) ** 2) * abs(a_eb) ** 2
    )


def _longid_rhs(x: np.ndarray, re1: np.ndarray, rb1: np.ndarray, re2: np.ndarray, rb2: np.ndarray) -> np.ndarray:
    a_ee, a_bb = 1 - x * re1 * re2, 1 - x * rb1 * rb2
    a_eb, a_be = 1 - x * re1 * rb2, 1 - x * rb1 * re2
    c = np.conj
    return (
        x * (re1 * re2 * a_bb * c(a_eb) * c(a_be) + re1 * rb2 * a_be * c(a_ee) * c(a_bb))
        + x * (rb1 * rb2 * a_ee * c(a_be) * c(a_eb) + rb1 * re2 * a_eb * c(a_bb) * c(a_ee))
        + a_ee * a_bb * c(a_eb) * c(a_be)
        + c(a_ee) * c(a_bb) * a_eb * a_be
    )


def check_four_factor_identity(rng: np.random.Generator, n: int) -> np.ndarray:
    re1, rb1, re2, rb2 = _random_reflections(rng, n)
    x = rng.uniform(0.0, 1.0, n) * np.exp(1j * rng.uniform(0.0, 2.0 * np.pi, n))
    lhs = _longid_lhs(x, re1, rb1, re2, rb2)
    rhs = _longid_rhs(x, re1, rb1, re2, rb2)
    return _scaled(lhs - rhs, lhs, rhs)


# --- Kinematic identities ---


def check_termtrans(rng: np.random.Generator, n: int) -> np.ndarray:
    ctx = _random_context(rng, n)
    b = ctx.beta
    lhs = ctx.s_prime_sq + ctx.u_prime * b * ctx.omega_prime
    rhs = ctx.s**2 - ctx.u * b * ctx.omega
    return _scaled(lhs - rhs, ctx.s**2, ctx.u * b * ctx.omega)


def check_w_invariance(rng: np.random.Generator, n: int) -> np.ndarray:
    ctx = _random_context(rng, n)
    lhs = ctx.omega_prime**2 - ctx.s_prime_sq
    return _scaled(lhs - ctx.w_sq, ctx.omega_prime**2, ctx.s_prime_sq)


def check_overlap_norm(rng: np.random.Generator, n: int) -> np.ndarray:
    ctx = _random_context(rng, n)
    lam, nu = overlaps(ctx)
    return _scaled(lam**2 + nu**2 - 1.0, lam**2, nu**2)


# --- Cavity operator identities ---


def _operator_samples(
    rng: np.random.Generator, n: int
) -> tuple[WaveContext, CavityOperators, CavityExpansion]:
    ctx = _random_context(rng, n, propagating=True)
    size = ctx.shape[0]
    refl = reflect(ctx, Medium(), Medium())
    re1, rb1, re2, rb2 = _random_reflections(rng, size)
    refl = replace(refl, r_e1=re1, r_b1=rb1, r_e2=re2, r_b2=rb2)
    ops = build_operators(ctx, Medium(), Medium(), reflection=refl)
    return ctx, ops, expand_inverse(ctx, ops)


def check_inverse_expansion(rng: np.random.Generator, n: int) -> np.ndarray:
    ctx, ops, expansion = _operator_samples(rng, n)
    identity = np.eye(3)
    phase = expansion.phase[..., None, None]
    product = (identity + expansion.m) @ (identity - phase * (ops.r1 @ ops.r2))
    return np.max(np.abs(product - identity), axis=(-2, -1))


def check_left_mover_relation(rng: np.random.Generator, n: int) -> np.ndarray:
    ctx, ops, expansion = _operator_samples(rng, n)
    identity = np.eye(3)
    deviation = expansion.n - ops.r2 @ (identity + expansion.m)
    return np.max(np.abs(deviation), axis=(-2, -1))


def check_green_agreement(rng: np.random.Generator, n: int) -> np.ndarray:
    deviations = []
    for medium1, medium2, size in _chunks(rng, n):
        ctx = _random_context(rng, size)
        x = float(rng.uniform(0.05, 0.95))
        x_source = float(-rng.uniform(1e-3, 1.0))
        ops = build_operators(ctx, medium1, medium2)
        expansion = expand_inverse(ctx, ops)
        expanded = green_tensor(x, x_source, ctx, expansion)
        direct = direct_green_tensor(x, x_source, ctx, ops)
        scale = np.maximum(np.max(np.abs(direct), axis=(-2, -1)), 1e-300)
        deviations.append(np.max(np.abs(expanded - direct), axis=(-2, -1)) / scale)
    return np.concatenate(deviations)


# --- Density relations ---


def check_poynting_relation(rng: np.random.Generator, n: int) -> np.ndarray:
    deviations = []
    for medium1, medium2, size in _chunks(rng, n):
        ctx = _random_context(rng, size)
        refl = reflect(ctx, medium1, medium2)
        t1 = float(rng.uniform(0.0, 2.0))
        flux = density_plate1(ctx, refl, Channel.POYNTING1_X, t1).value
        drag = density_plate1(ctx, refl, Channel.SIGMA1_XY, t1).value
        deviations.append(np.abs(flux + ctx.omega / ctx.u * drag) / np.maximum(np.abs(flux), 1e-300))
    return np.concatenate(deviations)


def check_lateral_additivity(rng: np.random.Generator, n: int) -> np.ndarray:
    deviations = []
    for medium1, medium2, size in _chunks(rng, n):
        ctx = _random_context(rng, size)
        refl = reflect(ctx, medium1, medium2)
        t1, t2 = (float(t) for t in rng.uniform(0.0, 2.0, 2))
        combined = density_lateral(ctx, refl, t1, t2).value
        first = density_plate1(ctx, refl, Channel.SIGMA1_XY, t1).value
        second = density_plate2(ctx, refl, Channel.SIGMA2_XY, t2).value
        scale = np.maximum.reduce([np.abs(combined), np.abs(first), np.abs(second)])
        deviations.append(np.abs(combined - first - second) / np.maximum(scale, 1e-300))
    return np.concatenate(deviations)


def check_coth_split(rng: np.random.Generator, n: int) -> np.ndarray:
    omega = rng.uniform(-20.0, 20.0, n)
    omega = np.where(omega == 0, 1.0, omega)
    temperature = float(rng.uniform(0.05, 5.0))
    occ = occupation(omega, temperature)
    exact = 1.0 / np.tanh(omega / (2.0 * temperature))
    return np.abs(occ.total - exact) / np.abs(exact)


CHECKS: dict[str, tuple[str, float, CheckFn]] = {
    "im_permittivity": ("Im eps from w1, mu and s", SCALAR_TOL, check_im_permittivity),
    "re_response_product": ("Re(eps* mu* w1) closed form", SCALAR_TOL, check_re_response_product),
    "im_response_product": ("Im(eps* mu* w1) closed form", SCALAR_TOL, check_im_response_product),
    "conjugate_symmetry": ("eps(-omega) == conj(eps(omega))", 0.0, check_conjugate_symmetry),
    "real_w_identity": ("Re(x r r a*) + |a|^2/2 for |x| = 1", SCALAR_TOL, check_real_w_identity),
    "imaginary_w_identity": ("Im(x r r a*) for real x", SCALAR_TOL, check_imaginary_w_identity),
    "four_factor_identity": ("cavity-factor rearrangement", SCALAR_TOL, check_four_factor_identity),
    "termtrans": ("s'^2 + u' beta omega' == s^2 - u beta omega", SCALAR_TOL, check_termtrans),
    "w_invariance": ("w unchanged by the Lorentz map", SCALAR_TOL, check_w_invariance),
    "overlap_norm": ("lambda^2 + nu^2 == 1", SCALAR_TOL, check_overlap_norm),
    "inverse_expansion": ("(1 + M)(1 - x R1 R2) == 1", MATRIX_TOL, check_inverse_expansion),
    "left_mover_relation": ("N == R2 (1 + M)", MATRIX_TOL, check_left_mover_relation),
    "green_agreement": ("expanded vs directly inverted Green tensor", 1e-10, check_green_agreement),
    "poynting_relation": ("S1x density == -(omega/u) sigma1xy density", 1e-13, check_poynting_relation),
    "lateral_additivity": ("lateral == sigma1xy + sigma2xy", SCALAR_TOL, check_lateral_additivity),
    "coth_split": ("sgn + thermal == coth(omega / 2T)", 1e-13, check_coth_split),
}


def run_validation(
    samples: int = 10_000,
    seed: int = 0,
    names: list[str] | None = None,
) -> list[IdentityCheck]:
    selected = names if names is not None else list(CHECKS)
    unknown = [name for name in selected if name not in CHECKS]
    if unknown:
        raise ValueError(f"Unknown check: {', '.join(unknown)}")
    results: list[IdentityCheck] = []
    for index, name in enumerate(selected):
        description, tolerance, fn = CHECKS[name]
        rng = np.random.default_rng([seed, index])
        deviations = np.asarray(fn(rng, samples), dtype=float)
        worst = float(np.max(deviations)) if deviations.size else 0.0
        check = IdentityCheck(name, description, tolerance, worst, int(deviations.size))
        if not check.passed:
            logger.warning("Check %s failed: max deviation %.3e > %.1e", name, worst, tolerance)
        results.append(check)
    return results


def format_report(results: list[IdentityCheck]) -> str:
    lines = [f"{'check':24s} {'samples':>8s} {'max dev':>10s} {'tol':>8s}  status"]
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        lines.append(f"{r.name:24s} {r.samples:8d} {r.max_deviation:10.2e} {r.tolerance:8.0e}  {status}")
    return "\n".join(lines)

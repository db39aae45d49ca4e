from __future__ import annotations

import logging
import math
from typing import Any
from unittest import mock

import numpy as np
import pytest
from scipy import integrate

from casimove._constants import CASIMIR_MIRROR_STRESS
from casimove.cavity import Cavity, CavityConfig, PlateConfig
from casimove.exceptions import CavityResonanceError
from casimove.material import PERFECT_MIRROR, DispersionModel, Medium, ModelKind
from casimove.quadrature import (
    HeatResult,
    IntegrationPlan,
    async_integrate_channel,
    blackbody_pressure,
    build_patches,
    integrate_channel,
    integrate_force,
    integrate_heat,
    planck_tail_fraction,
)
from casimove.spectral import Channel, sample_density

PLASMA = 2.0
DAMPING = 0.5


def _make_drude(plasma: float = PLASMA, damping: float = DAMPING) -> Medium:
    return Medium(DispersionModel(ModelKind.DRUDE, {"plasma": plasma, "damping": damping}))


def _make_dielectric() -> Medium:
    return Medium(
        DispersionModel(ModelKind.LORENTZ, {"strength": 3.0, "resonance": 1.5, "damping": 0.4})
    )


def _drude_eps(omega: complex) -> complex:
    return 1.0 - PLASMA**2 / (omega * (omega + 1j * DAMPING))


def _root(z: complex) -> complex:
    root = np.sqrt(complex(z))
    return -root if root.imag < 0 else root


# --- Reference integrals at rest ---


def _matsubara_kernel(xi: float, k: float, plasma: float = PLASMA, damping: float = DAMPING) -> float:
    """k q sum_p r^2 e^{-2q} / (1 - r^2 e^{-2q}) for Drude plates at imaginary frequency xi."""
    q = math.hypot(xi, k)
    if xi == 0.0:
        # Drude limit: TM reflects fully, TE not at all
        x = math.exp(-2 * k)
        return k * k * x / (1 - x)
    eps = 1.0 + plasma**2 / (xi * (xi + damping))
    q1 = math.sqrt(eps * xi * xi + k * k)
    r_te = (q - q1) / (q + q1)
    r_tm = (eps * q - q1) / (eps * q + q1)
    x = math.exp(-2 * q)
    return k * q * sum(r * r * x / (1 - r * r * x) for r in (r_te, r_tm))


def _lifshitz_stress(temperature: float, plasma: float = PLASMA, damping: float = DAMPING) -> float:
    """Equilibrium Lifshitz stress from the Matsubara sum."""
    total = 0.0
    n = 0
    while True:
        xi = 2 * math.pi * n * temperature
        if xi > 45.0:
            break
        term, _ = integrate.quad(
            lambda k: _matsubara_kernel(xi, k, plasma, damping), 0, np.inf, epsabs=0, epsrel=1e-11, limit=200
        )
        total += 0.5 * term if n == 0 else term
        n += 1
    return temperature / math.pi * total


def _zero_temperature_stress() -> float:
    value, _ = integrate.dblquad(
        lambda k, xi: _matsubara_kernel(xi, k) if xi > 0 else 0.0,
        0, np.inf, 0, np.inf, epsabs=0, epsrel=1e-10,
    )
    return value / (2 * math.pi**2)


def _heat_kernel(omega: float, s: float, *, evanescent: bool) -> float:
    w = _root(omega * omega - s * s)
    w1 = _root(_drude_eps(omega) * omega * omega - s * s)
    eps = _drude_eps(omega)
    phase = np.exp(2j * w)
    total = 0.0
    for r in ((w - w1) / (w + w1), -(eps * w - w1) / (eps * w + w1)):
        den = abs(1 - r * r * phase) ** 2
        if evanescent:
            total += 4 * r.imag**2 * abs(phase) / den
        else:
            total += (1 - abs(r) ** 2) ** 2 / den
    return total


def _polder_van_hove(temperature: float, cutoff: float) -> float:
    """S1x emitted by plate 1 at rest toward a plate at T = 0."""

    def spectral(omega: float) -> float:
        prop, _ = integrate.quad(lambda s: s * _heat_kernel(omega, s, evanescent=False), 0, omega, epsrel=1e-10)
        evan, _ = integrate.quad(
            lambda q: q * _heat_kernel(omega, math.hypot(omega, q), evanescent=True),
            0, np.inf, epsrel=1e-10, limit=200,
        )
        return omega / math.expm1(omega / temperature) * (prop + evan)

    value, _ = integrate.quad(spectral, 0, cutoff * temperature, epsrel=1e-9, limit=200)
    return value / (4 * math.pi**2)


# --- IntegrationPlan ---


class TestIntegrationPlan:
    @pytest.mark.parametrize(
        "kwargs",
        [
            {"rel_tol": 0.0},
            {"abs_tol": -1.0},
            {"max_cells": 0},
            {"threads": 0},
            {"cutoff": 0.0},
            {"disk_radius": -2.0},
        ],
    )
    def test_rejects_invalid(self, kwargs: dict) -> None:
        with pytest.raises(ValueError):
            IntegrationPlan(**kwargs)

    def test_default_tolerances_per_channel(self) -> None:
        plan = IntegrationPlan()
        assert plan.tolerance_for(Channel.QVAC_IMAG) == 1e-6
        assert plan.tolerance_for(Channel.SIGMA1_XY) == 1e-4
        assert IntegrationPlan(rel_tol=1e-3).tolerance_for(Channel.QVAC_IMAG) == 1e-3

    def test_planck_tail_fraction(self) -> None:
        expected, _ = integrate.quad(lambda x: x**3 * math.exp(-x), 12.0, np.inf)
        assert planck_tail_fraction(12.0) == pytest.approx(expected / 6.0, rel=1e-10)
        assert planck_tail_fraction(0.0) == pytest.approx(1.0)


# --- Patches ---


class TestBuildPatches:
    def test_cold_source_has_no_patches(self) -> None:
        cavity = Cavity(beta=0.2, medium1=_make_drude(), medium2=_make_drude(), t2=1.0)
        assert build_patches(Channel.SIGMA1_XX, cavity, IntegrationPlan()) == []
        assert len(build_patches(Channel.SIGMA2_XX, cavity, IntegrationPlan())) == 4

    def test_plates_at_rest_have_no_seam(self) -> None:
        cavity = Cavity(medium1=_make_drude(), medium2=_make_drude(), t1=0.5, t2=1.0)
        names = [p.name for p in build_patches(Channel.LATERAL, cavity, IntegrationPlan())]
        assert names == [
            "sigma1_xy:evanescent",
            "sigma1_xy:propagating",
            "sigma2_xy:evanescent",
            "sigma2_xy:propagating",
        ]

    def test_lateral_collects_both_plates(self) -> None:
        cavity = Cavity(beta=0.2, medium1=_make_drude(), medium2=_make_drude(), t1=0.5, t2=1.0)
        names = [p.name for p in build_patches(Channel.LATERAL, cavity, IntegrationPlan())]
        assert names == [
            f"{plate}:{part}"
            for plate in ("sigma1_xy", "sigma2_xy")
            for part in ("below_seam", "above_seam", "evanescent", "propagating")
        ]

    @pytest.mark.parametrize("fold_v", [True, False])
    @pytest.mark.parametrize("beta", [0.6, -0.6])
    def test_seam_is_a_patch_edge(self, beta: float, fold_v: bool) -> None:
        cavity = Cavity(beta=beta, medium1=_make_drude(), medium2=_make_drude(), t1=1.0)
        seen: list[tuple[np.ndarray, np.ndarray]] = []

        def capture(channel: Channel, cavity: Cavity, omega: Any, u: Any, v: Any, *, thermal: bool) -> np.ndarray:
            seen.append((np.asarray(omega), np.asarray(u)))
            return np.zeros_like(np.asarray(omega, dtype=float))

        # q <= 1 keeps the seam below the Planck cutoff
        t = np.random.default_rng(11).uniform(0.01, 0.5, (500, 3))
        patches = build_patches(Channel.SIGMA1_XY, cavity, IntegrationPlan(fold_v=fold_v))
        with mock.patch("casimove.quadrature._real_density", side_effect=capture):
            for patch in patches[:3]:
                patch.integrand(t)
        (below_w, below_u), (above_w, above_u), (far_w, far_u) = seen
        assert np.all(below_w < beta * below_u)
        assert np.all(above_w > beta * above_u)
        assert np.all(far_w > beta * far_u)

    def test_qvac_imag_disk(self) -> None:
        cavity = Cavity(medium1=_make_drude(), medium2=_make_drude())
        assert [p.name for p in build_patches("qvac_imag", cavity, IntegrationPlan())] == ["qvac_imag:quadrant"]
        disk = build_patches("qvac_imag", cavity, IntegrationPlan(disk_radius=2.0))
        assert [p.name for p in disk] == ["qvac_imag:disk"]

    def test_qvac_real_needs_room_beyond_disk(self) -> None:
        cavity = Cavity(medium1=_make_drude(), medium2=_make_drude())
        with pytest.raises(ValueError, match="real_omega_max"):
            build_patches(Channel.QVAC_REAL, cavity, IntegrationPlan(disk_radius=5.0, real_omega_max=5.0))

    def test_patch_values_are_finite(self) -> None:
        cavity = Cavity(beta=0.4, medium1=_make_drude(), medium2=_make_dielectric(), t1=0.5, t2=0.3)
        t = np.random.default_rng(3).uniform(0.01, 0.99, (200, 3))
        for channel in (Channel.SIGMA1_XX, Channel.SIGMA2_XY, Channel.QVAC_IMAG, Channel.QVAC_REAL):
            for patch in build_patches(channel, cavity, IntegrationPlan()):
                assert np.all(np.isfinite(patch.integrand(t))), patch.name


# --- Perfect mirrors ---


class TestMirrorLimit:
    def test_qvac_reproduces_casimir_stress(self) -> None:
        result = integrate_channel(Channel.QVAC_IMAG, Cavity(medium1=PERFECT_MIRROR, medium2=PERFECT_MIRROR))
        assert result.converged
        assert result.value == pytest.approx(CASIMIR_MIRROR_STRESS, rel=1e-5)
        assert result.error <= 1e-6 * result.value

    def test_si_pressure(self) -> None:
        gap = 1e-6
        config = CavityConfig(
            gap=gap,
            plate1=PlateConfig(PERFECT_MIRROR),
            plate2=PlateConfig(PERFECT_MIRROR),
        )
        result = integrate_force(config)
        pascal = result.pressure * config.units.stress_unit
        expected = -math.pi**2 * 1.054571817e-34 * 299792458.0 / (240 * gap**4)
        assert pascal == pytest.approx(expected, rel=1e-5)
        assert result.sigma_xy.total == 0.0


# --- Equilibrium at rest ---


class TestEquilibrium:
    def test_zero_temperature_matches_lifshitz(self) -> None:
        cavity = Cavity(medium1=_make_drude(), medium2=_make_drude())
        result = integrate_channel(Channel.QVAC_IMAG, cavity)
        assert result.converged
        assert result.value == pytest.approx(_zero_temperature_stress(), rel=1e-5)

    # scaling plasma, damping and T together is the same cavity at a different gap
    @pytest.mark.parametrize("scale", [0.5, 0.75, 1.0, 1.5, 2.0])
    def test_thermal_stress_matches_matsubara_sum(self, scale: float) -> None:
        plasma, damping, temperature = PLASMA * scale, DAMPING * scale, 0.25 * scale
        medium = _make_drude(plasma, damping)
        cavity = Cavity(medium1=medium, medium2=medium, t1=temperature, t2=temperature)
        result = integrate_force(cavity, IntegrationPlan(rel_tol=1e-5))
        assert result.converged
        expected = _lifshitz_stress(temperature, plasma, damping)
        assert result.cavity_sigma_xx == pytest.approx(expected, rel=1e-3)

    def test_radiation_pressure_per_plate(self) -> None:
        cavity = Cavity(medium1=_make_drude(), medium2=_make_drude(), t1=0.3, t2=0.2)
        result = integrate_force(cavity, IntegrationPlan(rel_tol=1e-2))
        assert result.radiation_pressure.qvac == 0.0
        assert result.radiation_pressure.thermal1 == pytest.approx(math.pi**2 * 0.3**4 / 90.0)
        assert result.radiation_pressure.thermal2 == pytest.approx(blackbody_pressure(0.2))
        assert result.cavity_sigma_xx == result.sigma_xx.total + result.radiation_pressure.total
        cold = integrate_force(Cavity(medium1=_make_drude(), medium2=_make_drude()), IntegrationPlan(rel_tol=1e-2))
        assert cold.radiation_pressure.total == 0.0

    def test_plates_share_thermal_stress_at_rest(self) -> None:
        cavity = Cavity(medium1=_make_drude(), medium2=_make_drude(), t1=0.4, t2=0.4)
        plan = IntegrationPlan(rel_tol=1e-5)
        first = integrate_channel(Channel.SIGMA1_XX, cavity, plan)
        second = integrate_channel(Channel.SIGMA2_XX, cavity, plan)
        assert first.value == pytest.approx(second.value, rel=1e-4)


# --- Heat flux ---


class TestHeatFlux:
    def test_matches_polder_van_hove(self) -> None:
        temperature = 0.3
        cavity = Cavity(medium1=_make_drude(), medium2=_make_drude(), t1=temperature)
        result = integrate_heat(cavity, IntegrationPlan(rel_tol=1e-5))
        assert isinstance(result, HeatResult)
        assert result.converged
        assert result.poynting_1x > 0
        assert result.poynting_2x == 0.0
        expected = _polder_van_hove(temperature, cutoff=40.0)
        assert result.poynting_1x == pytest.approx(expected, rel=1e-3)

    def test_hotter_plate_emits_more(self) -> None:
        plan = IntegrationPlan(rel_tol=1e-3)
        warm = integrate_heat(Cavity(medium1=_make_drude(), medium2=_make_drude(), t1=0.4), plan)
        cool = integrate_heat(Cavity(medium1=_make_drude(), medium2=_make_drude(), t1=0.2), plan)
        assert warm.poynting_1x > cool.poynting_1x > 0

    def test_cold_plate_emits_nothing(self) -> None:
        result = integrate_heat(
            Cavity(beta=0.3, medium1=_make_drude(), medium2=_make_drude(), t2=1.0), IntegrationPlan(rel_tol=1e-3)
        )
        assert result.poynting_1x == 0.0
        assert result.errors["poynting_1x"] == 0.0
        assert result.integrals[Channel.POYNTING1_X].evaluations == 0
        assert result.poynting_2x < 0

    def test_comoving_flux_mirrors_plate1_at_rest(self) -> None:
        plan = IntegrationPlan(rel_tol=1e-4)
        warm, cold = _make_drude(), _make_dielectric()
        first = integrate_heat(Cavity(medium1=warm, medium2=cold, t1=0.4, t2=0.1), plan)
        swapped = integrate_heat(Cavity(medium1=cold, medium2=warm, t1=0.1, t2=0.4), plan)
        bound = 2 * (first.errors["poynting_1x"] + swapped.errors["poynting_2x"])
        assert abs(swapped.poynting_2x + first.poynting_1x) <= bound
        assert first.poynting_1x > 0 > swapped.poynting_2x


# --- Sliding plates ---


class TestSlidingPlates:
    @pytest.mark.parametrize("beta", [0.1, 0.3, 0.6])
    def test_zero_temperature_has_no_drag(self, beta: float) -> None:
        cavity = Cavity(beta=beta, medium1=_make_drude(), medium2=_make_dielectric())
        result = integrate_force(cavity, IntegrationPlan(rel_tol=1e-4))
        assert result.sigma_xy.total == 0.0
        assert result.errors["sigma_xy"] <= 1e-6 * abs(result.sigma_xx.total)
        assert result.poynting_1x == 0.0
        assert result.sigma_xx.qvac > 0
        assert result.errors["sigma_xx"] < 1e-3 * result.sigma_xx.total

    @pytest.mark.parametrize("beta", [0.1, 0.6])
    def test_zero_temperature_lateral_density_vanishes(self, beta: float) -> None:
        cavity = Cavity(beta=beta, medium1=_make_drude(), medium2=_make_dielectric())
        rng = np.random.default_rng(5)
        omega = rng.uniform(0.05, 3.0, 300)
        s = rng.uniform(0.1, 3.0, 300) * omega
        phi = rng.uniform(0.0, 2 * np.pi, 300)
        u, v = s * np.cos(phi), s * np.sin(phi)
        keep = np.abs(omega - beta * u) > 1e-3
        assert np.any(omega[keep] < beta * u[keep])
        sample = sample_density(Channel.LATERAL, cavity, omega[keep], u[keep], v[keep])
        np.testing.assert_array_equal(sample.value, 0.0)

    @pytest.mark.parametrize("beta", [0.1, 0.6])
    def test_zero_temperature_normal_stress_is_even(self, beta: float) -> None:
        plan = IntegrationPlan(rel_tol=1e-5)
        media = {"medium1": _make_drude(), "medium2": _make_dielectric()}
        plus = integrate_channel(Channel.QVAC_IMAG, Cavity(beta=beta, **media), plan)  # type: ignore[arg-type]
        minus = integrate_channel(Channel.QVAC_IMAG, Cavity(beta=-beta, **media), plan)  # type: ignore[arg-type]
        assert abs(plus.value - minus.value) <= 2 * (plus.error + minus.error)

    @pytest.mark.parametrize("channel", [Channel.SIGMA1_XY, Channel.SIGMA2_XY])
    def test_drag_converges_under_tolerance_halving(self, channel: Channel) -> None:
        cavity = Cavity(beta=0.6, medium1=_make_drude(), medium2=_make_drude(), t1=1.0, t2=0.5)
        coarse = integrate_channel(channel, cavity, IntegrationPlan(rel_tol=1e-3))
        fine = integrate_channel(channel, cavity, IntegrationPlan(rel_tol=5e-4))
        assert coarse.converged and fine.converged
        assert abs(fine.value - coarse.value) <= coarse.error + fine.error

    def test_drag_opposes_relative_motion(self) -> None:
        cavity = Cavity(beta=0.3, medium1=_make_drude(), medium2=_make_drude(), t1=0.3, t2=0.3)
        result = integrate_channel(Channel.LATERAL, cavity)
        assert result.converged
        assert result.value > 10 * result.error

    @pytest.mark.parametrize(
        ("channel", "parity"),
        [
            (Channel.SIGMA1_XY, -1.0),
            (Channel.SIGMA2_XY, -1.0),
            (Channel.SIGMA1_XX, 1.0),
            (Channel.SIGMA2_XX, 1.0),
        ],
    )
    def test_velocity_reversal(self, channel: Channel, parity: float) -> None:
        plan = IntegrationPlan(rel_tol=1e-4)
        media = {"medium1": _make_drude(), "medium2": _make_dielectric(), "t1": 0.4, "t2": 0.3}
        plus = integrate_channel(channel, Cavity(beta=0.25, **media), plan)  # type: ignore[arg-type]
        minus = integrate_channel(channel, Cavity(beta=-0.25, **media), plan)  # type: ignore[arg-type]
        assert plus.value != 0.0
        assert abs(minus.value - parity * plus.value) <= 2 * (plus.error + minus.error) + 1e-14

    @pytest.mark.parametrize("media", [(_make_drude(), _make_drude()), (_make_drude(), _make_dielectric())])
    def test_real_and_imaginary_forms_agree(self, media: tuple[Medium, Medium]) -> None:
        cavity = Cavity(beta=0.3, medium1=media[0], medium2=media[1])
        plan = IntegrationPlan(rel_tol=1e-5, disk_radius=2.0, real_omega_max=60.0)
        imag = integrate_channel(Channel.QVAC_IMAG, cavity, plan)
        real = integrate_channel(Channel.QVAC_REAL, cavity, plan)
        assert real.value == pytest.approx(imag.value, rel=1e-3)

    def test_folding_v_matches_full_circle(self) -> None:
        cavity = Cavity(beta=0.2, medium1=_make_drude(), medium2=_make_drude(), t1=0.3)
        folded = integrate_channel(Channel.SIGMA1_XX, cavity, IntegrationPlan(rel_tol=1e-4))
        full = integrate_channel(Channel.SIGMA1_XX, cavity, IntegrationPlan(rel_tol=1e-4, fold_v=False))
        assert abs(folded.value - full.value) <= 3 * (folded.error + full.error)


# --- Engine ---


class TestEngine:
    def test_thread_count_does_not_change_result(self) -> None:
        cavity = Cavity(beta=0.2, medium1=_make_drude(), medium2=_make_drude(), t1=0.3)
        one = integrate_channel(Channel.SIGMA1_XY, cavity, IntegrationPlan(rel_tol=1e-3, threads=1))
        four = integrate_channel(Channel.SIGMA1_XY, cavity, IntegrationPlan(rel_tol=1e-3, threads=4))
        assert one.value == four.value
        assert one.error == four.error
        assert one.cells == four.cells

    def test_cell_cap_reports_non_convergence(self, caplog: pytest.LogCaptureFixture) -> None:
        cavity = Cavity(medium1=_make_drude(), medium2=_make_drude(), t1=0.3)
        with caplog.at_level(logging.WARNING, logger="casimove"):
            result = integrate_channel(Channel.SIGMA1_XX, cavity, IntegrationPlan(rel_tol=1e-12, max_cells=1))
        assert not result.converged
        assert result.cells == 2
        assert "did not converge" in caplog.text

    def test_resonant_cells_are_excluded(self, caplog: pytest.LogCaptureFixture) -> None:
        cavity = Cavity(medium1=_make_drude(), medium2=_make_drude(), t1=0.3)
        with mock.patch(
            "casimove.quadrature._real_density",
            side_effect=CavityResonanceError("resonance", (1.0, 0.5, 0.0)),
        ):
            with caplog.at_level(logging.WARNING, logger="casimove"):
                result = integrate_channel(Channel.SIGMA1_XX, cavity)
        assert result.value == 0.0
        assert [cell.patch for cell in result.excluded] == ["sigma1_xx:evanescent", "sigma1_xx:propagating"]
        assert result.excluded[0].lower == (0.0, 0.0, 0.0)
        assert result.excluded[0].upper == (1.0, 1.0, 1.0)
        assert "Cell excluded" in caplog.text

    def test_other_errors_propagate(self) -> None:
        cavity = Cavity(medium1=_make_drude(), medium2=_make_drude(), t1=0.3)
        with mock.patch("casimove.quadrature._real_density", side_effect=RuntimeError("boom")):
            with pytest.raises(RuntimeError, match="boom"):
                integrate_channel(Channel.SIGMA1_XX, cavity)

    def test_debug_event_log(self) -> None:
        cavity = Cavity(medium1=_make_drude(), medium2=_make_drude(), t1=0.3)
        result = integrate_channel(Channel.SIGMA1_XX, cavity, IntegrationPlan(rel_tol=1e-3), debug=True)
        assert result.event_log is not None
        assert len(result.event_log.filter(event_type="patch_start")) == 2
        assert len(result.event_log.filter(event_type="converged")) == 1
        assert {e.channel for e in result.event_log} == {"sigma1_xx"}
        done = result.event_log.filter(event_type="patch_done")
        assert sum(e.details["cells"] for e in done) == result.cells

    def test_force_merges_channel_logs(self) -> None:
        cavity = Cavity(medium1=_make_drude(), medium2=_make_drude(), t1=0.3)
        result = integrate_force(cavity, IntegrationPlan(rel_tol=1e-2), debug=True)
        assert result.event_log is not None
        assert result.event_log.channels == ["qvac_imag", "sigma1_xx", "sigma1_xy", "poynting1_x"]
        assert len(result.event_log) == sum(
            len(i.event_log) for i in result.integrals.values() if i.event_log is not None
        )
        for channel in result.event_log.channels:
            assert result.event_log.outcome(channel) is not None

    def test_no_event_log_without_debug(self) -> None:
        cavity = Cavity(medium1=_make_drude(), medium2=_make_drude(), t1=0.3)
        assert integrate_channel(Channel.SIGMA1_XX, cavity, IntegrationPlan(rel_tol=1e-2)).event_log is None

    def test_tail_bound_scales_with_cutoff(self) -> None:
        cavity = Cavity(medium1=_make_drude(), medium2=_make_drude(), t1=0.3)
        result = integrate_channel(Channel.SIGMA1_XX, cavity, IntegrationPlan(rel_tol=1e-3, cutoff=20.0))
        assert result.tail_bound == pytest.approx(planck_tail_fraction(20.0) * abs(result.value))

    def test_evaluations_count_nodes(self) -> None:
        cavity = Cavity(medium1=_make_drude(), medium2=_make_drude(), t1=0.3)
        result = integrate_channel(Channel.SIGMA1_XX, cavity, IntegrationPlan(rel_tol=1e-3))
        assert result.evaluations % 15**3 == 0
        assert result.evaluations >= result.cells * 15**3

    async def test_async_entry_point(self) -> None:
        cavity = Cavity(medium1=PERFECT_MIRROR, medium2=PERFECT_MIRROR)
        result = await async_integrate_channel("qvac_imag", cavity, IntegrationPlan(rel_tol=1e-4))
        assert result.channel is Channel.QVAC_IMAG
        assert result.value == pytest.approx(CASIMIR_MIRROR_STRESS, rel=1e-4)

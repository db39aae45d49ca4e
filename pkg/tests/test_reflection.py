from __future__ import annotations

import numpy as np
import pytest

from casimove.exceptions import CavityResonanceError, ReflectionPoleError
from casimove.kinematics import build_context
from casimove.material import PERFECT_MIRROR, VACUUM, DispersionModel, Medium, ModelKind
from casimove.reflection import (
    _fresnel,
    cavity_factors,
    fresnel_plate1,
    fresnel_plate2,
    kinematic_weights,
    reflect,
)


def _make_dielectric(value: float = 4.0, loss: float = 0.0) -> Medium:
    return Medium(DispersionModel(ModelKind.CONSTANT, {"value": value, "loss": loss}))


def _make_drude() -> Medium:
    return Medium(DispersionModel(ModelKind.DRUDE, {"plasma": 3.0, "damping": 0.2}))


# --- Fresnel coefficients ---


class TestFresnel:
    def test_vacuum_plate_is_transparent(self) -> None:
        ctx = build_context(1.0, 0.3, 0.4, 0.2)
        r_e, r_b, t_e, t_b = fresnel_plate1(ctx, VACUUM)
        assert r_e == 0 and r_b == 0
        assert t_e == 1 and t_b == 1
        r_e2, r_b2 = fresnel_plate2(ctx, VACUUM)
        assert r_e2 == 0 and r_b2 == 0

    def test_perfect_mirror_limit(self) -> None:
        ctx = build_context(np.array([0.5, 2.0]), 1.0, 0.0, 0.3)
        r_e, r_b, t_e, _ = fresnel_plate1(ctx, PERFECT_MIRROR)
        np.testing.assert_array_equal(r_e, -1.0)
        np.testing.assert_array_equal(r_b, -1.0)
        np.testing.assert_array_equal(t_e, 0.0)
        np.testing.assert_array_equal(fresnel_plate2(ctx, PERFECT_MIRROR)[1], -1.0)

    def test_dielectric_closed_form(self) -> None:
        ctx = build_context(1.0, 0.5, 0.0, 0.0)
        w, w1 = np.sqrt(0.75), np.sqrt(3.75)
        r_e, r_b, t_e, t_b = fresnel_plate1(ctx, _make_dielectric())
        assert r_e == pytest.approx((w - w1) / (w + w1))
        assert r_b == pytest.approx(-(4 * w - w1) / (4 * w + w1))
        assert t_e == pytest.approx(1 - r_e)
        assert t_b == pytest.approx(2.0 * (1 + r_b))

    def test_plates_agree_at_rest(self) -> None:
        ctx = build_context(np.linspace(0.2, 3.0, 9), 1.1, 0.4, 0.0)
        r_e1, r_b1, _, _ = fresnel_plate1(ctx, _make_drude())
        r_e2, r_b2 = fresnel_plate2(ctx, _make_drude())
        np.testing.assert_allclose(r_e2, r_e1, rtol=1e-13)
        np.testing.assert_allclose(r_b2, r_b1, rtol=1e-13)

    def test_passive_propagating(self) -> None:
        ctx = build_context(np.linspace(0.5, 4.0, 15), 0.3, 0.2, 0.0)
        r_e, r_b, _, _ = fresnel_plate1(ctx, _make_drude())
        assert np.all(np.abs(r_e) <= 1.0)
        assert np.all(np.abs(r_b) <= 1.0)

    def test_evanescent_te_absorbs(self) -> None:
        ctx = build_context(np.linspace(0.1, 0.9, 9), 1.5, 0.5, 0.0)
        r_e, _, _, _ = fresnel_plate1(ctx, _make_drude())
        assert np.all(r_e.imag >= 0)

    def test_moving_plate_sees_doppler_shift(self) -> None:
        ctx = build_context(2.0, 0.5, 0.7, 0.4)
        rest = build_context(float(ctx.omega_prime), float(ctx.u_prime), 0.7, 0.0)
        r_e2, _ = fresnel_plate2(ctx, _make_drude())
        r_e_rest, _, _, _ = fresnel_plate1(rest, _make_drude())
        assert r_e2 == pytest.approx(r_e_rest, rel=1e-12)

    def test_pole_raises(self) -> None:
        with pytest.raises(ReflectionPoleError, match=r"\[plate1\]"):
            _fresnel(-2.0, 1.0, 1.0j, 2.0j, "plate1")


# --- Cavity factors ---


class TestCavityFactors:
    def test_products(self) -> None:
        ctx = build_context(2.0, 0.6, 0.8, 0.0)
        a_ee, a_bb, a_eb, a_be, _, phase = cavity_factors(ctx, 0.5, -0.2j, 0.1, 0.3)
        assert phase == pytest.approx(np.exp(2j * np.sqrt(3.0)))
        assert a_ee == pytest.approx(1 - phase * 0.5 * 0.1)
        assert a_bb == pytest.approx(1 - phase * (-0.2j) * 0.3)
        assert a_eb == pytest.approx(1 - phase * 0.5 * 0.3)
        assert a_be == pytest.approx(1 - phase * (-0.2j) * 0.1)

    def test_denominator_at_rest(self) -> None:
        ctx = build_context(2.0, 0.6, 0.8, 0.0)
        a_ee, a_bb, _, _, denominator, _ = cavity_factors(ctx, 0.5, 0.4, 0.1, 0.3)
        assert denominator == pytest.approx(a_ee * a_bb)

    def test_kinematic_weights(self) -> None:
        ctx = build_context(2.0, 0.6, 0.8, 0.5)
        kin_p, kin_v = kinematic_weights(ctx)
        assert kin_p == pytest.approx(1.0 - 0.6)
        assert kin_v == pytest.approx(0.64 * 0.25 * 3.0)

    def test_resonance_carries_point(self) -> None:
        ctx = build_context(1.0, 0.0, 0.0, 0.0)
        with pytest.raises(CavityResonanceError) as info:
            cavity_factors(ctx, 0.5, 0.5, 0.5, 0.5)
        assert info.value.point == (1.0, 0.0, 0.0)
        assert "omega=1.0" in str(info.value)

    def test_reflect_bundles_everything(self) -> None:
        ctx = build_context(np.array([0.5, 1.5]), np.array([1.0, 0.2]), 0.3, 0.25)
        refl = reflect(ctx, _make_drude(), _make_dielectric(loss=0.1))
        assert refl.r_e1.shape == (2,)
        expected = refl.kin_p**2 * refl.a_ee * refl.a_bb + refl.a_eb * refl.a_be * refl.kin_v
        np.testing.assert_allclose(refl.denominator, expected)

    def test_vacuum_cavity_is_trivial(self) -> None:
        ctx = build_context(1.0, 0.3, 0.4, 0.2)
        refl = reflect(ctx, VACUUM, VACUUM)
        assert refl.a_ee == 1 and refl.a_bb == 1

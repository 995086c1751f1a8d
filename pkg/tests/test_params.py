import numpy as np
import pytest
from scipy import constants

from mirrorent.params import (
    HBAR_SI,
    ModeParams,
    PhysicalSetup,
    UnitSystem,
    db_to_relative_psd,
    effective_zetas,
    measurement_strength,
    omega_alpha_from_alpha,
)


def make_setup(**kw):
    base = dict(m=10.0, omega_m=2 * np.pi, gamma_m=2 * np.pi * 1e-3,
                P=1.0, omega_0=2 * np.pi * 2.82e14, tau=0.5)
    base.update(kw)
    return PhysicalSetup(**base)


class TestUnitSystem:
    def test_si_round_trip_12_digits(self):
        us = UnitSystem(mass_unit=12.7, freq_unit=2 * np.pi * 371.0)
        for value in (1.3e-38, 4.2e-20, 7.0):
            assert us.vxx_from_internal(us.vxx_to_internal(value)) == pytest.approx(value, rel=1e-12)
            assert us.vpp_from_internal(us.vpp_to_internal(value)) == pytest.approx(value, rel=1e-12)
            assert us.vxp_from_internal(us.vxp_to_internal(value)) == pytest.approx(value, rel=1e-12)
            assert us.freq_from_internal(us.freq_to_internal(value)) == pytest.approx(value, rel=1e-12)

    def test_hbar_fixed(self):
        assert UnitSystem().hbar == 1.0

    def test_rejects_bad_scales(self):
        with pytest.raises(ValueError):
            UnitSystem(mass_unit=0.0)

    def test_ground_state_position_variance(self):
        # x_zp^2 = hbar/(2 m omega) must convert to 1/2 internal units
        us = UnitSystem(mass_unit=3.0, freq_unit=100.0)
        x_zp2 = HBAR_SI / (2 * 3.0 * 100.0)
        assert us.vxx_to_internal(x_zp2) == pytest.approx(0.5, rel=1e-12)


class TestMeasurementStrength:
    def test_differential_value_1w_1064nm(self):
        # frozen from direct evaluation of sqrt(4 hbar w0 P)/c with CODATA
        setup = make_setup()
        alpha = measurement_strength(setup, "differential")
        assert alpha == pytest.approx(2.88377824758783e-18, rel=1e-10)

    def test_common_mode_tau_one_doubles(self):
        setup = make_setup(tau=1.0)
        assert measurement_strength(setup, "common") == pytest.approx(
            2 * measurement_strength(setup, "differential"), rel=1e-14)

    def test_common_mode_tau_tenth(self):
        setup = make_setup(tau=0.1)
        assert measurement_strength(setup, "common") == pytest.approx(
            20 * measurement_strength(setup, "differential"), rel=1e-14)

    def test_scales_as_sqrt_power(self):
        rng = np.random.default_rng(11)
        for _ in range(20):
            p = rng.uniform(0.1, 100.0)
            k = rng.uniform(1.1, 9.0)
            a1 = measurement_strength(make_setup(P=p), "differential")
            a2 = measurement_strength(make_setup(P=k * p), "differential")
            assert a2 / a1 == pytest.approx(np.sqrt(k), rel=1e-12)

    def test_common_scales_inverse_tau(self):
        rng = np.random.default_rng(12)
        for _ in range(20):
            tau = rng.uniform(0.2, 1.0)
            k = rng.uniform(1.1, 3.0)
            a1 = measurement_strength(make_setup(tau=tau), "common")
            a2 = measurement_strength(make_setup(tau=tau / k), "common")
            assert a2 / a1 == pytest.approx(k, rel=1e-12)

    def test_rejects_unknown_mode(self):
        with pytest.raises(ValueError):
            measurement_strength(make_setup(), "dark")

    def test_setup_validation(self):
        with pytest.raises(ValueError):
            make_setup(tau=0.0)
        with pytest.raises(ValueError):
            make_setup(tau=1.5)
        with pytest.raises(ValueError):
            make_setup(P=-1.0)
        with pytest.raises(ValueError):
            make_setup(gamma_m=0.0)


class TestOmegaAlpha:
    def test_identity_case(self):
        m = 0.37
        alpha = np.sqrt(m * HBAR_SI)
        assert omega_alpha_from_alpha(alpha, m) == pytest.approx(1.0, rel=1e-12)

    def test_linearity(self):
        assert omega_alpha_from_alpha(2e-18, 1.0) == pytest.approx(
            2 * omega_alpha_from_alpha(1e-18, 1.0), rel=1e-14)

    def test_fig_value(self):
        # frozen from direct evaluation with m = 0.1 kg and the 1 W strength
        assert omega_alpha_from_alpha(2.88377824758783e-18, 0.1) == pytest.approx(
            0.8880221142634852, rel=1e-10)

    def test_rejects_nonpositive(self):
        with pytest.raises(ValueError):
            omega_alpha_from_alpha(0.0, 1.0)


class TestDbConversion:
    def test_vacuum_reference(self):
        assert db_to_relative_psd(0.0) == 1.0

    def test_ten_db(self):
        assert db_to_relative_psd(10.0) == pytest.approx(10.0, rel=1e-14)

    def test_three_db(self):
        assert db_to_relative_psd(3.0) == pytest.approx(1.9952623149688795, rel=1e-12)

    def test_vectorized(self):
        np.testing.assert_allclose(db_to_relative_psd([0.0, 10.0]), [1.0, 10.0])


class TestEffectiveZetas:
    def test_fig2_common_mode(self):
        mode = ModeParams(omega_alpha=2 * np.pi * 1600, omega_F=2 * np.pi * 230,
                          omega_x=2 * np.pi * 1270)
        zf2, zx2 = effective_zetas(mode)
        assert zf2 == pytest.approx(0.0206640625, rel=1e-10)
        assert zx2 == pytest.approx(1.5872031744063488, rel=1e-10)

    def test_vacuum_corrections_vanish(self):
        rng = np.random.default_rng(13)
        for _ in range(50):
            wa, wf, wx = np.exp(rng.uniform(-2, 6, size=3))
            mode = ModeParams(omega_alpha=wa, omega_F=wf, omega_x=wx)
            zf2, zx2 = effective_zetas(mode)
            assert zf2 == pytest.approx((wf / wa) ** 2, rel=1e-13)
            assert zx2 == pytest.approx((wa / wx) ** 2, rel=1e-13)

    def test_ten_db_adds_four_and_a_half(self):
        base = ModeParams(omega_alpha=1.0, omega_F=0.3, omega_x=5.0)
        noisy = base.with_(S_a1=10.0, S_a2=10.0)
        z0 = effective_zetas(base)
        z1 = effective_zetas(noisy)
        assert z1[0] - z0[0] == pytest.approx(4.5, rel=1e-13)
        assert z1[1] - z0[1] == pytest.approx(4.5, rel=1e-13)

    def test_sub_vacuum_rejected_naming_quadrature(self):
        with pytest.raises(ValueError, match="amplitude"):
            ModeParams(omega_alpha=1.0, omega_F=0.01, omega_x=5.0, S_a1=0.5)
        with pytest.raises(ValueError, match="phase"):
            ModeParams(omega_alpha=1.0, omega_F=1.0, omega_x=100.0, S_a2=0.5)

    def test_sub_vacuum_allowed_while_nonnegative(self):
        # large bare zeta absorbs a mildly squeezed input
        mode = ModeParams(omega_alpha=1.0, omega_F=2.0, omega_x=1.0, S_a1=0.9, S_a2=0.9)
        zf2, zx2 = effective_zetas(mode)
        assert zf2 >= 0 and zx2 >= 0

    def test_mode_validation(self):
        with pytest.raises(ValueError):
            ModeParams(omega_alpha=0.0, omega_F=1.0, omega_x=1.0)
        with pytest.raises(ValueError):
            ModeParams(omega_alpha=1.0, omega_F=-1.0, omega_x=1.0)
        with pytest.raises(ValueError):
            ModeParams(omega_alpha=1.0, omega_F=1.0, omega_x=1.0, gamma_m=0.0)


def test_codata_constants_used():
    assert HBAR_SI == constants.hbar

"""Physical and normalized parameter records plus hardware conversions.

All model computations run in internal units with hbar = 1 and unit reduced
mirror mass; frequencies are measured against a caller-chosen reference.
Only frequency ratios enter the dimensionless results (entanglement,
uncertainty products, SQL-normalized budgets), so nothing is lost and the
arithmetic stays well away from 1e-34 scales.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np
from scipy import constants

HBAR_SI = constants.hbar
C_SI = constants.c


@dataclass(frozen=True)
class UnitSystem:
    """Internal unit conventions: hbar = 1, reduced mass = 1.

    Parameters
    ----------
    mass_unit : float
        kg per internal mass unit (the reduced mirror mass).
    freq_unit : float
        rad/s per internal frequency unit (the reference frequency).
    """

    mass_unit: float = 1.0
    freq_unit: float = 1.0

    hbar = 1.0  # internal action scale, fixed

    def __post_init__(self):
        if self.mass_unit <= 0 or self.freq_unit <= 0:
            raise ValueError("unit scales must be positive")

    # derived SI scales for one internal unit of each quantity
    @property
    def position_unit_si(self):
        return np.sqrt(HBAR_SI / (self.mass_unit * self.freq_unit))

    @property
    def momentum_unit_si(self):
        return np.sqrt(HBAR_SI * self.mass_unit * self.freq_unit)

    def freq_to_internal(self, omega_si):
        return omega_si / self.freq_unit

    def freq_from_internal(self, omega):
        return omega * self.freq_unit

    def vxx_from_internal(self, vxx):
        """Position variance, internal -> m^2."""
        return vxx * self.position_unit_si**2

    def vxx_to_internal(self, vxx_si):
        return vxx_si / self.position_unit_si**2

    def vpp_from_internal(self, vpp):
        """Momentum variance, internal -> (kg m/s)^2."""
        return vpp * self.momentum_unit_si**2

    def vpp_to_internal(self, vpp_si):
        return vpp_si / self.momentum_unit_si**2

    def vxp_from_internal(self, vxp):
        """Cross moment, internal (units of hbar) -> J s."""
        return vxp * HBAR_SI

    def vxp_to_internal(self, vxp_si):
        return vxp_si / HBAR_SI


@dataclass(frozen=True)
class PhysicalSetup:
    """Hardware-level interferometer description (SI units).

    m: reduced mirror mass [kg]; omega_m, gamma_m: pendulum frequency and
    damping [rad/s]; P: circulating arm power [W]; omega_0: carrier angular
    frequency [rad/s]; tau: power-recycling mirror transmissivity.
    """

    m: float
    omega_m: float
    gamma_m: float
    P: float
    omega_0: float
    tau: float
    c: float = C_SI

    def __post_init__(self):
        if self.m <= 0:
            raise ValueError("mass must be positive")
        if self.omega_m < 0:
            raise ValueError("pendulum frequency must be nonnegative")
        if self.gamma_m <= 0:
            raise ValueError("pendulum damping must be strictly positive")
        if self.P <= 0:
            raise ValueError("circulating power must be positive")
        if self.omega_0 <= 0:
            raise ValueError("carrier frequency must be positive")
        if not 0 < self.tau <= 1:
            raise ValueError("transmissivity must satisfy 0 < tau <= 1")


@dataclass(frozen=True)
class ModeParams:
    """All scalars defining one measurement channel (common or differential).

    Frequencies share one unit (rad/s against the chosen reference); phi is
    the homodyne quadrature angle; S_a1/S_a2 are the input amplitude/phase
    quadrature PSDs relative to vacuum (vacuum = 1).
    """

    omega_alpha: float
    omega_F: float
    omega_x: float
    omega_m: float = 0.0
    gamma_m: float = 1e-6
    phi: float = 0.0
    S_a1: float = 1.0
    S_a2: float = 1.0

    def __post_init__(self):
        if self.omega_alpha <= 0:
            raise ValueError("omega_alpha must be positive")
        if self.omega_F < 0:
            raise ValueError("omega_F must be nonnegative")
        if self.omega_x <= 0:
            raise ValueError("omega_x must be positive")
        if self.omega_m < 0:
            raise ValueError("omega_m must be nonnegative")
        if self.gamma_m <= 0:
            raise ValueError("gamma_m must be strictly positive (stable plant)")
        if self.S_a1 < 0 or self.S_a2 < 0:
            raise ValueError("input quadrature PSDs must be nonnegative")
        # sub-vacuum inputs are allowed only while the effective zetas stay
        # physical; this raises otherwise
        effective_zetas(self)

    def with_(self, **kw):
        return replace(self, **kw)


def measurement_strength(setup: PhysicalSetup, mode: str) -> float:
    """Optomechanical measurement strength alpha [kg m/s] of one readout.

    The differential channel sees sqrt(4 hbar omega_0 P)/c; the common
    channel is enhanced by 2/tau through the recycling cavity.
    """
    base = np.sqrt(4.0 * HBAR_SI * setup.omega_0 * setup.P) / setup.c
    if mode == "differential":
        return base
    if mode == "common":
        if setup.tau == 0:
            raise ValueError("tau = 0 gives an unbounded common-mode strength")
        return (2.0 / setup.tau) * base
    raise ValueError(f"mode must be 'common' or 'differential', got {mode!r}")


def omega_alpha_from_alpha(alpha: float, m: float, hbar: float = HBAR_SI) -> float:
    """Measurement-strength frequency alpha/sqrt(m hbar) [rad/s]."""
    if alpha <= 0 or m <= 0:
        raise ValueError("alpha and m must be positive")
    return alpha / np.sqrt(m * hbar)


def db_to_relative_psd(level_db):
    """Noise level in dB above vacuum -> PSD relative to vacuum."""
    return 10.0 ** (np.asarray(level_db, dtype=float) / 10.0)


def effective_zetas(mode: ModeParams):
    """Effective (zeta_F^2, zeta_x^2) including technical laser noise.

    zeta_F = omega_F/omega_alpha and zeta_x = omega_alpha/omega_x; input
    noise above vacuum adds (S_a1 - 1)/2 and (S_a2 - 1)/2 to the squares.
    """
    zf2 = (mode.omega_F / mode.omega_alpha) ** 2 + (mode.S_a1 - 1.0) / 2.0
    zx2 = (mode.omega_alpha / mode.omega_x) ** 2 + (mode.S_a2 - 1.0) / 2.0
    if zf2 < 0:
        raise ValueError(
            "sub-vacuum amplitude quadrature pushes effective zeta_F^2 negative"
        )
    if zx2 < 0:
        raise ValueError(
            "sub-vacuum phase quadrature pushes effective zeta_x^2 negative"
        )
    return zf2, zx2

"""Spectral densities of one measurement channel and the SQL noise budget.

Model (internal units hbar = m = 1): the readout quadrature at homodyne
angle phi is

    y(w) = sin(phi) a1 + cos(phi) [a2 + alpha (x(w) + xi_x)]

and the mirror responds to radiation pressure plus classical force noise,

    x(w) = -(alpha a1 + xi_F) / (w^2 + i gamma_m w - omega_m^2).

With white classical noise S_xiF = 2 omega_F^2 and S_xix = 2/omega_x^2 the
six (cross-)spectra are rational in w; they are held symbolically so the
Wiener solver can factorize and integrate them in closed form.  All PSDs
are single-sided and vacuum-normalized (vacuum quadratures have S = 1;
second moments are integral dW/2pi over [0, inf)).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .params import ModeParams, effective_zetas
from .ratfunc import RationalFunction


@dataclass(frozen=True)
class SpectraSet:
    """The six (cross-)spectral densities feeding the Wiener solver.

    S_x, S_p, S_y are real and nonnegative on the real axis; S_xy, S_py,
    S_xp are complex.  All are Hermitian-symmetric.  ``mode`` keeps the
    originating white-model parameters when applicable; the moment
    integrator uses it for an analytically factored (better conditioned)
    path and it is None for spectra with user-supplied classical noise.
    """

    S_x: RationalFunction
    S_p: RationalFunction
    S_y: RationalFunction
    S_xy: RationalFunction
    S_py: RationalFunction
    S_xp: RationalFunction
    mode: ModeParams | None = None


def plant_factor(mode: ModeParams):
    """Coefficients of w^2 + i gamma_m w - omega_m^2 (roots in the LHP)."""
    return np.array([-mode.omega_m**2, 1j * mode.gamma_m, 1.0], dtype=complex)


def build_spectra(mode: ModeParams, s_xi_force=None, s_xi_sense=None) -> SpectraSet:
    """Assemble the channel's spectral densities as rational functions.

    Parameters
    ----------
    mode : ModeParams
    s_xi_force, s_xi_sense : RationalFunction, optional
        Non-white classical force/sensing noise PSDs replacing the white
        defaults 2*omega_F^2 and 2/omega_x^2.  Supplying either drops the
        factored white-model fast path (the generic solver still applies).

    Returns
    -------
    SpectraSet
    """
    if mode.gamma_m <= 0:
        raise ValueError("unstable pendulum: gamma_m must be positive")
    alpha = mode.omega_alpha  # alpha/sqrt(m hbar) = alpha when hbar = m = 1
    c = alpha
    sphi, cphi = np.sin(mode.phi), np.cos(mode.phi)

    white = s_xi_force is None and s_xi_sense is None
    if s_xi_force is None:
        s_xi_force = RationalFunction([2.0 * mode.omega_F**2])
    if s_xi_sense is None:
        s_xi_sense = RationalFunction([2.0 / mode.omega_x**2])

    d_plus = plant_factor(mode)
    chi = RationalFunction([-1.0], d_plus, reduce=False)
    chi_c = chi.conj_reflected()
    inv_dx = chi * chi_c  # |chi|^2 = 1/D_x

    S_x = (alpha**2 * mode.S_a1 + s_xi_force) * inv_dx
    S_xy = cphi * c * S_x + sphi * alpha * mode.S_a1 * chi
    S_y = (
        sphi**2 * mode.S_a1
        + cphi**2 * (mode.S_a2 + c**2 * s_xi_sense)
        + cphi**2 * c**2 * S_x
        + sphi * cphi * c * alpha * mode.S_a1 * (chi + chi_c)
    )
    w1 = RationalFunction([0.0, 1.0], reduce=False)
    S_p = w1 * w1 * S_x
    S_xp = 1j * w1 * S_x
    S_py = -1j * w1 * S_xy
    return SpectraSet(
        S_x=S_x, S_p=S_p, S_y=S_y, S_xy=S_xy, S_py=S_py, S_xp=S_xp,
        mode=mode if white else None,
    )


def sql(m, omega, hbar=1.0):
    """Free-mass standard quantum limit 2*hbar/(m*omega^2)."""
    omega = np.asarray(omega, dtype=float)
    if np.any(omega <= 0):
        raise ValueError("omega must be positive")
    return 2.0 * hbar / (m * omega**2)


def budget(mode: ModeParams, omega):
    """SQL-normalized, position-referred noise budget at frequency omega.

    Returns both the detection-band form (quantum noise
    (W^2/Wa^2 + Wa^2/W^2)/2, force noise zF^2 Wa^2/W^2, sensing noise
    zx^2 W^2/Wa^2, keys ``s_quant``/``s_force``/``s_sens``/``s_total``)
    and the exact rational evaluation carrying the full pendulum response
    (same keys with ``_exact``).  Technical laser noise enters through the
    effective zeta^2 of the classical terms.  Phase-quadrature readout.
    """
    omega = np.asarray(omega, dtype=float)
    if np.any(omega <= 0):
        raise ValueError("omega must be positive")
    wa = mode.omega_alpha
    zf2, zx2 = effective_zetas(mode)

    s_quant = 0.5 * (omega**2 / wa**2 + wa**2 / omega**2)
    s_force = zf2 * wa**2 / omega**2
    s_sens = zx2 * omega**2 / wa**2

    dx = (omega**2 - mode.omega_m**2) ** 2 + (mode.gamma_m * omega) ** 2
    s_quant_exact = 0.5 * (omega**2 / wa**2 + wa**2 * omega**2 / dx)
    s_force_exact = (mode.omega_F**2 + 0.5 * (mode.S_a1 - 1.0) * wa**2) * omega**2 / dx
    s_sens_exact = s_sens

    return {
        "s_quant": s_quant,
        "s_force": s_force,
        "s_sens": s_sens,
        "s_total": s_quant + s_force + s_sens,
        "s_quant_exact": s_quant_exact,
        "s_force_exact": s_force_exact,
        "s_sens_exact": s_sens_exact,
        "s_total_exact": s_quant_exact + s_force_exact + s_sens_exact,
    }

"""Two-mirror covariance assembly and logarithmic negativity.

The east/north mirror coordinates relate to the measured common and
differential modes through x_e = (x_c + x_d)/2, x_n = (x_c - x_d)/2 and
p_e = p_c + p_d, p_n = p_c - p_d, which fixes the 1/4, 1/2, 1 factor
pattern of the covariance blocks.  hbar = 1 throughout; a physical
covariance has both symplectic eigenvalues >= 1/2.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import PhysicalityError
from .wiener import ConditionalMoments

HBAR = 1.0


@dataclass(frozen=True)
class TwoModeCovariance:
    """Symmetric 4x4 covariance over (x_e, p_e, x_n, p_n) in block form."""

    V: np.ndarray

    def __post_init__(self):
        V = np.asarray(self.V, dtype=float)
        if V.shape != (4, 4):
            raise ValueError("covariance must be 4x4")
        if not np.allclose(V, V.T, rtol=1e-12, atol=0):
            raise ValueError("covariance must be symmetric")
        object.__setattr__(self, "V", V)

    @property
    def V_ee(self):
        return self.V[:2, :2]

    @property
    def V_nn(self):
        return self.V[2:, 2:]

    @property
    def V_en(self):
        return self.V[:2, 2:]

    V_ne = V_en


def assemble(common: ConditionalMoments, differential: ConditionalMoments) -> TwoModeCovariance:
    """Two-mirror covariance from the two channels' conditional moments.

    V_ee = V_nn = [[(Vxx_c + Vxx_d)/4, (Vxp_c + Vxp_d)/2],
                   [(Vxp_c + Vxp_d)/2,  Vpp_c + Vpp_d]]
    and V_en carries the same entries with differences (c minus d).
    """
    c, d = common, differential
    a_s = (c.V_xx + d.V_xx) / 4.0
    b_s = (c.V_xp + d.V_xp) / 2.0
    c_s = c.V_pp + d.V_pp
    a_m = (c.V_xx - d.V_xx) / 4.0
    b_m = (c.V_xp - d.V_xp) / 2.0
    c_m = c.V_pp - d.V_pp
    V = np.array(
        [
            [a_s, b_s, a_m, b_m],
            [b_s, c_s, b_m, c_m],
            [a_m, b_m, a_s, b_s],
            [b_m, c_m, b_s, c_s],
        ]
    )
    return TwoModeCovariance(V)


def to_mode_basis(cov: TwoModeCovariance) -> np.ndarray:
    """Rotate back to (x_c, p_c, x_d, p_d); block-diagonal for assembled states."""
    T = np.array(
        [
            [1.0, 0.0, 1.0, 0.0],
            [0.0, 0.5, 0.0, 0.5],
            [1.0, 0.0, -1.0, 0.0],
            [0.0, 0.5, 0.0, -0.5],
        ]
    )
    return T @ cov.V @ T.T


def _dets(cov: TwoModeCovariance):
    det_ee = float(np.linalg.det(cov.V_ee))
    det_en = float(np.linalg.det(cov.V_en))
    # exact for this symmetric-block structure: det V = det(Vee+Ven) det(Vee-Ven)
    det_v = float(np.linalg.det(cov.V_ee + cov.V_en) * np.linalg.det(cov.V_ee - cov.V_en))
    return det_ee, det_en, det_v


def physicality_check(cov: TwoModeCovariance, tol=1e-9):
    """Symplectic eigenvalues of V and the Heisenberg verdict.

    Returns {"symplectic_eigenvalues": (nu_minus, nu_plus), "is_physical": bool};
    physical means min(nu) >= hbar/2 - tol.

    For the symmetric-block family (V_ee = V_nn, V_en = V_ne) the mode-basis
    rotation is symplectic and block-diagonalizes V, so the eigenvalues are
    the square roots of the single-mode determinants.  That route is exact at
    the pure-state boundary, where the generic two-mode formula
    sqrt((Sig - sqrt(Sig^2 - 4 det V))/2) with Sig = 2 det V_ee + 2 det V_en
    loses half the digits to cancellation; the formula is used otherwise.
    """
    M = to_mode_basis(cov)
    off = np.abs(M[:2, 2:]).max()
    if off <= 1e-12 * np.abs(M).max():
        nus = sorted(
            float(np.sqrt(max(np.linalg.det(M[k: k + 2, k: k + 2]), 0.0)))
            for k in (0, 2)
        )
        nu_m, nu_p = nus
    else:
        det_ee, det_en, det_v = _dets(cov)
        sig = 2.0 * det_ee + 2.0 * det_en
        disc = max(sig**2 - 4.0 * det_v, 0.0)
        nu_m = np.sqrt(max((sig - np.sqrt(disc)) / 2.0, 0.0))
        nu_p = np.sqrt((sig + np.sqrt(disc)) / 2.0)
    return {
        "symplectic_eigenvalues": (float(nu_m), float(nu_p)),
        "is_physical": bool(nu_m >= HBAR / 2.0 - tol),
    }


def log_negativity(cov: TwoModeCovariance):
    """Logarithmic negativity of the two-mirror Gaussian state.

    E_N = max[0, -log2(2 sigma_minus / hbar)] with sigma_minus the smallest
    symplectic eigenvalue of the partial transpose,
    sigma_minus^2 = (Sigma - sqrt(Sigma^2 - 4 det V))/2 and
    Sigma = det V_nn + det V_ee - 2 det V_ne.

    Returns {"E_N", "sigma_minus", "Sigma"}.  Raises PhysicalityError for
    an unphysical input covariance (an upstream convention bug, never a
    physics result).
    """
    check = physicality_check(cov)
    if not check["is_physical"]:
        raise PhysicalityError(
            "covariance violates the Heisenberg bound: symplectic eigenvalues "
            f"{check['symplectic_eigenvalues']}"
        )
    det_ee, det_en, det_v = _dets(cov)
    sigma = 2.0 * det_ee - 2.0 * det_en
    disc = max(sigma**2 - 4.0 * det_v, 0.0)
    sigma_minus = np.sqrt(max((sigma - np.sqrt(disc)) / 2.0, 0.0))
    e_n = max(0.0, -np.log2(2.0 * sigma_minus / HBAR))
    return {"E_N": float(e_n), "sigma_minus": float(sigma_minus), "Sigma": float(sigma)}


def ellipse_points(moments: ConditionalMoments, omega_norm: float, n_points: int = 64):
    """1-sigma covariance ellipse of one mode, normalized to a ground state.

    Position is measured in units of sqrt(hbar/(2 m omega_norm)) and
    momentum in sqrt(hbar m omega_norm / 2), so the ground state of an
    oscillator at omega_norm maps to the unit circle.  Returns an
    (n_points, 2) array of boundary points.
    """
    if omega_norm <= 0:
        raise ValueError("omega_norm must be positive")
    if n_points < 8:
        raise ValueError("need at least 8 boundary points")
    x2 = HBAR / (2.0 * omega_norm)
    p2 = HBAR * omega_norm / 2.0
    M = np.array(
        [
            [moments.V_xx / x2, moments.V_xp / np.sqrt(x2 * p2)],
            [moments.V_xp / np.sqrt(x2 * p2), moments.V_pp / p2],
        ]
    )
    evals, evecs = np.linalg.eigh(M)
    theta = np.linspace(0.0, 2.0 * np.pi, n_points, endpoint=False)
    circle = np.stack([np.cos(theta), np.sin(theta)])
    return (evecs @ (np.sqrt(evals)[:, None] * circle)).T


def ellipse_aspect_ratio(moments: ConditionalMoments, omega_norm: float) -> float:
    """Major/minor axis ratio of the normalized squeezing ellipse."""
    x2 = HBAR / (2.0 * omega_norm)
    p2 = HBAR * omega_norm / 2.0
    M = np.array(
        [
            [moments.V_xx / x2, moments.V_xp / np.sqrt(x2 * p2)],
            [moments.V_xp / np.sqrt(x2 * p2), moments.V_pp / p2],
        ]
    )
    evals = np.linalg.eigvalsh(M)
    return float(np.sqrt(evals[1] / evals[0]))

"""Steady-state Kalman-Bucy filtering oracle for the measurement model.

Transcribes the single-channel measurement into a two-state linear
filtering problem and solves the continuous algebraic Riccati equation for
the steady-state conditional covariance.  This is an independent route to
the same moments the Wiener module computes from spectra, so the two
implementations cross-validate each other.

Noise bookkeeping: the spectra module uses single-sided PSDs (vacuum = 1),
so every white intensity entering the filter is S/2 (two-sided).  That
factor is pinned by the analytic free-mass solution, which reproduces the
closed-form moments exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy import linalg as sla

from .errors import NoStabilizingSolution
from .params import ModeParams
from .wiener import ConditionalMoments


@dataclass(frozen=True)
class StateSpaceModel:
    """dx = A x dt + dw, y dt = C x dt + dv;  <dw dw> = Q dt, <dv dv> = R dt,
    <dw dv> = Gamma dt (all two-sided intensities)."""

    A: np.ndarray
    Q: np.ndarray
    C: np.ndarray
    R: float
    Gamma: np.ndarray = field(default_factory=lambda: np.zeros((2, 1)))

    def __post_init__(self):
        object.__setattr__(self, "A", np.asarray(self.A, dtype=float))
        object.__setattr__(self, "Q", np.asarray(self.Q, dtype=float))
        object.__setattr__(self, "C", np.asarray(self.C, dtype=float).reshape(1, 2))
        object.__setattr__(self, "Gamma", np.asarray(self.Gamma, dtype=float).reshape(2, 1))
        if self.R <= 0:
            raise ValueError("observation noise intensity must be positive")
        if not np.allclose(self.Q, self.Q.T):
            raise ValueError("process noise intensity must be symmetric")
        if np.any(np.linalg.eigvalsh(self.Q) < -1e-12 * max(np.abs(self.Q).max(), 1.0)):
            raise ValueError("process noise intensity must be positive semidefinite")
        # PBH detectability: every non-decaying mode must be visible in C
        scale = max(np.abs(self.A).max(), np.abs(self.C).max(), 1.0)
        for lam in np.linalg.eigvals(self.A):
            if lam.real >= -1e-12 * scale:
                pbh = np.vstack([self.A - lam * np.eye(2), self.C.astype(complex)])
                if np.linalg.matrix_rank(pbh, tol=1e-10 * scale) < 2:
                    raise ValueError("(A, C) is not detectable")


def to_state_space(mode: ModeParams) -> StateSpaceModel:
    """State (x, p) filter model equivalent to the channel's spectra.

    A = [[0, 1], [-omega_m^2, -gamma_m]]; force noise alpha^2 S_a1 + 2 omega_F^2
    (single-sided) drives p; the readout noise is S_a2 + 2 alpha^2/omega_x^2
    at phi = 0.  For phi != 0 the shared amplitude-quadrature content of
    force and readout populates the cross intensity Gamma.
    """
    if mode.gamma_m <= 0:
        raise ValueError("unstable pendulum: gamma_m must be positive")
    alpha = mode.omega_alpha
    sphi, cphi = np.sin(mode.phi), np.cos(mode.phi)
    s_force = alpha**2 * mode.S_a1 + 2.0 * mode.omega_F**2
    s_read = sphi**2 * mode.S_a1 + cphi**2 * (mode.S_a2 + alpha**2 * 2.0 / mode.omega_x**2)
    return StateSpaceModel(
        A=np.array([[0.0, 1.0], [-mode.omega_m**2, -mode.gamma_m]]),
        Q=np.diag([0.0, s_force / 2.0]),
        C=np.array([[alpha * cphi, 0.0]]),
        R=s_read / 2.0,
        Gamma=np.array([[0.0], [sphi * alpha * mode.S_a1 / 2.0]]),
    )


def care_steady_state(model: StateSpaceModel) -> ConditionalMoments:
    """Stabilizing steady-state conditional covariance as ConditionalMoments."""
    V = solve_covariance(model)
    return ConditionalMoments(V_xx=V[0, 0], V_pp=V[1, 1], V_xp=V[0, 1])


def solve_covariance(model: StateSpaceModel) -> np.ndarray:
    """Stabilizing solution V of A V + V A' + Q - (V C' + G) R^-1 (C V + G') = 0.

    Solved by the Schur method (scipy) on the cross-term-reduced form, then
    polished with Newton steps (each a Lyapunov solve) until the residual is
    at machine level.  Raises NoStabilizingSolution when the closed-loop
    matrix fails to be Hurwitz.
    """
    A, Q, C, R, G = model.A, model.Q, model.C, model.R, model.Gamma
    Ri = 1.0 / R
    Abar = A - G @ C * Ri
    Qbar = Q - G @ G.T * Ri
    if np.abs(C).max() == 0.0 and np.abs(G).max() == 0.0:
        # no information channel: steady covariance solves the Lyapunov equation
        if np.any(np.linalg.eigvals(A).real >= 0):
            raise NoStabilizingSolution("no measurement and A not Hurwitz")
        V = sla.solve_continuous_lyapunov(A, -Q)
    else:
        try:
            V = sla.solve_continuous_are(Abar.T, C.T, Qbar, np.array([[R]]))
        except Exception as exc:
            raise NoStabilizingSolution(str(exc)) from exc

    def residual(V):
        K = (V @ C.T + G) * Ri
        return A @ V + V @ A.T + Q - K @ (C @ V + G.T), K

    scale = max(np.abs(Q).max(), np.abs(A @ V + V @ A.T).max(), 1e-300)
    for _ in range(8):
        res, K = residual(V)
        if np.abs(res).max() <= 1e-13 * scale:
            break
        Acl = A - K @ C
        if np.any(np.linalg.eigvals(Acl).real >= 0):
            raise NoStabilizingSolution("closed-loop matrix is not Hurwitz")
        V = V + sla.solve_continuous_lyapunov(Acl, -res)
        V = 0.5 * (V + V.T)

    res, K = residual(V)
    if np.abs(res).max() > 1e-12 * scale:
        raise NoStabilizingSolution(
            f"Riccati residual {np.abs(res).max():.2e} above tolerance"
        )
    if np.any(np.linalg.eigvals(A - K @ C).real >= 0):
        raise NoStabilizingSolution("closed-loop matrix is not Hurwitz")
    if np.any(np.linalg.eigvalsh(V) < -1e-12 * max(np.abs(V).max(), 1e-300)):
        raise NoStabilizingSolution("covariance is not positive semidefinite")
    return V

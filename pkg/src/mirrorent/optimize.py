"""Entanglement maximization over the two measurement strengths.

Maximizes E_N(omega_alpha_c, omega_alpha_d) at fixed noise-corner ratio
omega_x/omega_F (omega_F is the frequency unit), locates the smallest
ratio supporting entanglement, and sweeps ratio/noise grids.  The
closed-form moment path runs through the kernel backend; a numeric flag
switches to the full Wiener integrals for spot-validation.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy import optimize as sopt

from ._backend import kernels
from .entangle import assemble, log_negativity
from .errors import ThresholdNotFound
from .params import ModeParams, db_to_relative_psd
from .spectra import build_spectra
from .wiener import conditional_moments_numeric

GRID_N = 40
GRID_SPAN = (1e-2, 1e2)     # in units of sqrt(omega_F * omega_x)
SOFT_PENDULUM = 1e-6        # omega_m, gamma_m relative to omega_alpha (numeric path)


@dataclass(frozen=True)
class SweepPoint:
    """One maximized point of the entanglement-vs-noise-ratio landscape."""

    ratio_xF: float
    laser_db: float
    E_N_max: float
    omega_alpha_c_opt: float  # units of omega_F
    omega_alpha_d_opt: float
    flat_optimum: bool = False


def _noise_offsets(laser_db, noise_both_modes):
    dz = (db_to_relative_psd(laser_db) - 1.0) / 2.0
    if noise_both_modes:
        return (dz, dz, dz, dz)
    # bright-port modulation noise enters the common mode only
    return (dz, dz, 0.0, 0.0)


def _logneg_numeric(wa_c, wa_d, ratio, offsets):
    vals = []
    for wa, dzf, dzx in ((wa_c, offsets[0], offsets[1]), (wa_d, offsets[2], offsets[3])):
        mode = ModeParams(
            omega_alpha=wa,
            omega_F=1.0,
            omega_x=ratio,
            omega_m=SOFT_PENDULUM * wa,
            gamma_m=SOFT_PENDULUM * wa,
            S_a1=1.0 + 2.0 * dzf,
            S_a2=1.0 + 2.0 * dzx,
        )
        vals.append(conditional_moments_numeric(build_spectra(mode)))
    return log_negativity(assemble(vals[0], vals[1]))["E_N"]


def max_logneg(
    ratio_xF,
    laser_db=0.0,
    *,
    method="closed",
    grid_n=GRID_N,
    refine=True,
    noise_both_modes=False,
) -> SweepPoint:
    """Maximize E_N over both measurement strengths at one noise ratio.

    Strategy: log-grid scan over [1e-2, 1e2]*sqrt(omega_F omega_x) in both
    strengths, then derivative-free simplex refinement from the best cell
    and four neighbor starts.  Returns a flat-optimum point when the whole
    grid is unentangled.
    """
    if ratio_xF <= 0:
        raise ValueError("ratio_xF must be positive")
    if method not in ("closed", "numeric"):
        raise ValueError(f"unknown method {method!r}")
    offsets = _noise_offsets(laser_db, noise_both_modes)
    center = np.sqrt(ratio_xF)
    grid = np.geomspace(GRID_SPAN[0], GRID_SPAN[1], grid_n) * center

    if method == "closed":
        surface = kernels.logneg_grid(grid, grid, 1.0, ratio_xF, *offsets)
    else:
        surface = np.array(
            [[_logneg_numeric(c, d, ratio_xF, offsets) for d in grid] for c in grid]
        )
    i, j = np.unravel_index(int(np.argmax(surface)), surface.shape)
    best_grid = float(surface[i, j])
    if best_grid <= 0.0:
        return SweepPoint(
            ratio_xF=float(ratio_xF),
            laser_db=float(laser_db),
            E_N_max=0.0,
            omega_alpha_c_opt=float(center),
            omega_alpha_d_opt=float(center),
            flat_optimum=True,
        )

    best_val = best_grid
    best_xy = (grid[i], grid[j])
    if refine:
        if method == "closed":
            def objective(t):
                return -kernels.logneg_closed(
                    np.exp(t[0]), np.exp(t[1]), 1.0, ratio_xF, *offsets
                )
        else:
            def objective(t):
                return -_logneg_numeric(np.exp(t[0]), np.exp(t[1]), ratio_xF, offsets)

        starts = [(i, j)]
        for di, dj in ((1, 0), (-1, 0), (0, 1), (0, -1)):
            ii, jj = min(max(i + di, 0), grid_n - 1), min(max(j + dj, 0), grid_n - 1)
            starts.append((ii, jj))
        for ii, jj in starts:
            res = sopt.minimize(
                objective,
                np.log([grid[ii], grid[jj]]),
                method="Nelder-Mead",
                options=dict(xatol=1e-6, fatol=1e-12, maxiter=2000, maxfev=4000),
            )
            if -res.fun > best_val:
                best_val = float(-res.fun)
                best_xy = (float(np.exp(res.x[0])), float(np.exp(res.x[1])))
    return SweepPoint(
        ratio_xF=float(ratio_xF),
        laser_db=float(laser_db),
        E_N_max=best_val,
        omega_alpha_c_opt=float(best_xy[0]),
        omega_alpha_d_opt=float(best_xy[1]),
    )


def threshold_ratio(laser_db, *, lo=2.0, hi=50.0, tol=1e-3, **kw) -> float:
    """Smallest omega_x/omega_F with nonzero maximized entanglement.

    Bisection to absolute ratio tolerance ``tol``; raises ThresholdNotFound
    when even ratio ``hi`` supports no entanglement.
    """
    if laser_db < 0:
        raise ValueError("laser_db must be nonnegative")
    if max_logneg(hi, laser_db, **kw).E_N_max <= 1e-6:
        raise ThresholdNotFound(
            f"no entanglement up to omega_x/omega_F = {hi} at {laser_db} dB"
        )
    if max_logneg(lo, laser_db, **kw).E_N_max > 1e-6:
        return float(lo)
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if max_logneg(mid, laser_db, **kw).E_N_max > 1e-6:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


def _sweep_task(args):
    ratio, db, kw = args
    return max_logneg(ratio, db, **kw)


def sweep(ratios, noise_levels_db, *, jobs=1, **kw) -> list[SweepPoint]:
    """Cartesian max_logneg table, rows sorted by (noise level, ratio)."""
    ratios = [float(r) for r in ratios]
    levels = [float(x) for x in noise_levels_db]
    if not ratios or not levels:
        raise ValueError("sweep requires non-empty ratio and noise lists")
    tasks = [(r, db, kw) for db in sorted(levels) for r in sorted(ratios)]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_sweep_task, tasks))
    return [_sweep_task(t) for t in tasks]

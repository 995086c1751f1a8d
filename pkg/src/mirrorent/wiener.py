"""Causal Wiener filtering of the measurement record.

Provides minimum-phase spectral factorization of the output spectrum, the
causal/anticausal projections, the optimal filter gain, and the conditional
second moments of the posterior state, both as frequency-domain integrals
and in closed form for the white-noise model.

Conventions: time-domain signals are x(t) = int dW/2pi x(W) e^{-iWt}, so a
causal response has all poles in the lower half of the complex frequency
plane, and the spectral factor s_y (poles *and* zeros in the lower half
plane) together with 1/s_y is analytic in the upper half plane.

The moment integrals are evaluated through the orthogonal split

    V_ab = int (S_ab - f_a f_b~)  +  int [f_a]_- [f_b]_-~ ,
    f_a = S_ay / s_y~ ,

which needs residues only at well-separated poles: the first integrand
cancels the plant resonance algebraically, the second involves only the
anticausal poles.  The naive form int (S_a - [f_a]_+ [f_a]_+~) is
mathematically identical but numerically hopeless for high-Q pendulums
(near-axis residues cancel to 1 part in 1e12).
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
from numpy.polynomial import polynomial as npoly
from scipy import integrate

from .errors import FactorizationError, IntegrationError, ProjectionError
from .params import ModeParams, effective_zetas
from .ratfunc import RationalFunction, _from_roots, _polyroots
from .spectra import SpectraSet, build_spectra, plant_factor

AXIS_TOL = 1e-8        # factorization: roots this close to the axis are marginal
PROJECTION_TOL = 1e-12  # projection: half-plane assignment ambiguity guard only
CLUSTER_TOL = 1e-6     # relative distance below which roots merge to one pole


@dataclass(frozen=True)
class SpectralFactor:
    """Minimum-phase factor s_y of an output spectrum S_y = s_y s_y~."""

    s_y: RationalFunction

    def conj(self):
        return self.s_y.conj_reflected()

    def max_reconstruction_error(self, S_y, omegas):
        """sup over omegas of |s_y|^2/S_y - 1."""
        rec = np.abs(self.s_y(omegas)) ** 2
        ref = np.real(S_y(omegas))
        return float(np.max(np.abs(rec - ref) / np.abs(ref)))


@dataclass(frozen=True)
class ConditionalMoments:
    """Steady-state second moments of one mode's posterior Gaussian state.

    Units: hbar = 1, unit mass, frequencies as supplied; V_xx carries
    1/frequency, V_pp carries frequency, V_xp is in units of hbar.

    U = V_xx V_pp - V_xp^2 >= 1/4 holds whenever the model is physical; a
    strongly damped pendulum combined with weak force noise violates the
    fluctuation-dissipation relation and can produce U < 1/4, which is
    reported as a warning (the filtering solution itself is still exact).
    """

    V_xx: float
    V_pp: float
    V_xp: float

    def __post_init__(self):
        if not (self.V_xx > 0 and self.V_pp > 0):
            raise ValueError("conditional variances must be positive")
        u = self.V_xx * self.V_pp - self.V_xp**2
        if u < 0.25 * (1.0 - 1e-9):
            warnings.warn(
                f"conditional state with U = {u:.6g} below hbar^2/4: the "
                "damping/force-noise combination violates the "
                "fluctuation-dissipation bound",
                stacklevel=2,
            )


def uncertainty_product(moments: ConditionalMoments) -> float:
    """U = V_xx V_pp - V_xp^2, in units of hbar^2 (pure state: 1/4)."""
    return moments.V_xx * moments.V_pp - moments.V_xp**2


# ----------------------------------------------------------------------
# spectral factorization

def _real_even_coeffs(coeffs, what):
    """Project onto a real even polynomial; error if that loses structure.

    A single-sided spectrum of a real observable is real and even in the
    frequency, so odd coefficients and imaginary parts are rounding noise.
    """
    coeffs = np.asarray(coeffs, dtype=complex)
    scale = np.max(np.abs(coeffs))
    if np.max(np.abs(coeffs.imag)) > 1e-7 * scale or (
        coeffs.size > 1 and np.max(np.abs(coeffs[1::2])) > 1e-7 * scale
    ):
        raise FactorizationError(f"{what} is not a real even polynomial")
    out = coeffs.real.copy()
    out[1::2] = 0.0
    return out


def _lower_half_split(coeffs, what):
    """LHP half of the roots of a real even polynomial, via u = w^2.

    Rooting in u keeps the near-axis pole pairs of high-Q plants well
    conditioned (they merge only at gamma -> 0), and taking the LHP member
    of each +/-sqrt(u) pair yields an exactly conjugate-closed split.
    """
    even = coeffs[::2]
    u_roots = _polyroots(even)
    lower = np.empty(u_roots.size, dtype=complex)
    for i, u in enumerate(u_roots):
        w = np.sqrt(complex(u))
        if abs(w.imag) <= AXIS_TOL * max(1.0, abs(w)):
            raise FactorizationError(
                f"{what} root {w} within {AXIS_TOL} of the real axis "
                "(marginally stable or noiseless input)"
            )
        lower[i] = w if w.imag < 0 else -w
    return lower


def spectral_factorize(S_y: RationalFunction) -> SpectralFactor:
    """Factor S_y = s_y s_y~ with s_y minimum phase (all roots in LHP).

    Raises FactorizationError for spectra with roots on (or within
    tolerance of) the real axis, broken symmetry, or odd degrees.
    """
    if not S_y.is_hermitian(1e-7):
        raise FactorizationError("S_y is not Hermitian-symmetric")
    if S_y.num_degree % 2 or S_y.den_degree % 2:
        raise FactorizationError("numerator/denominator degrees must be even")
    num = _real_even_coeffs(S_y.num, "numerator")
    den = _real_even_coeffs(S_y.den, "denominator")
    zl = _lower_half_split(num, "numerator")
    pl = _lower_half_split(den, "denominator")
    k = num[-1] / den[-1]
    if k <= 0:
        raise FactorizationError(f"leading behavior {k} is not positive")
    s_y = RationalFunction(
        _from_roots(zl, np.sqrt(k)), _from_roots(pl), reduce=False
    )
    _sanity_reconstruction(s_y, S_y)
    return SpectralFactor(s_y)


def _sanity_reconstruction(s_y, S_y, tol=1e-6):
    rr = np.concatenate([S_y.zeros(), S_y.poles()])
    scale = np.median(np.abs(rr)) if rr.size else 1.0
    w = np.geomspace(max(scale, 1e-30) * 1e-2, max(scale, 1e-30) * 1e2, 17)
    rec = np.abs(s_y(w)) ** 2
    ref = np.real(S_y(w))
    err = np.max(np.abs(rec - ref) / np.abs(ref))
    if err > tol:
        raise FactorizationError(f"factor reconstruction error {err:.2e}")


# ----------------------------------------------------------------------
# partial fractions and half-plane projections

def _taylor_shift(c, p):
    """Coefficients of c(p + u) by repeated synthetic division."""
    c = np.asarray(c, dtype=complex)
    n = c.size
    out = np.zeros(n, dtype=complex)
    work = c.copy()
    for k in range(n):
        m = work.size
        if m == 1:
            out[k] = work[0]
            break
        q = np.empty(m - 1, dtype=complex)
        acc = work[m - 1]
        for i in range(m - 2, -1, -1):
            q[i] = acc
            acc = work[i] + acc * p
        out[k] = acc
        work = q
    return out


def _cluster_poles(roots):
    """Merge roots closer than CLUSTER_TOL into (center, multiplicity)."""
    order = np.argsort(roots.real + 1e-12 * roots.imag)
    groups = []
    for r in roots[order]:
        for g in groups:
            if abs(r - g[0] / g[1]) <= CLUSTER_TOL * max(1.0, abs(r)):
                g[0] += r
                g[1] += 1
                break
        else:
            groups.append([r, 1])
    return [(g[0] / g[1], g[1]) for g in groups]


def _principal_parts(f: RationalFunction, keep):
    """Principal-part coefficients of f at the selected pole clusters.

    Returns a list of (pole, [c_1 .. c_m]) for clusters passing ``keep``,
    where f ~ sum_k c_k/(w - pole)^k near each pole.  Requires a strictly
    proper f with no real-axis poles.
    """
    if not f.is_strictly_proper:
        raise ProjectionError("projection requires a strictly proper function")
    clusters = _cluster_poles(f.poles())
    for p, _ in clusters:
        if abs(p.imag) <= PROJECTION_TOL * max(1.0, abs(p)):
            raise ProjectionError(f"pole {p} on the real axis")
    out = []
    for idx, (p, m) in enumerate(clusters):
        if not keep(p):
            continue
        others = []
        for j, (q, mm) in enumerate(clusters):
            if j != idx:
                others += [q] * mm
        b = _taylor_shift(_from_roots(others), p)
        a = _taylor_shift(f.num, p)
        g = np.zeros(m, dtype=complex)
        for k in range(m):
            acc = a[k] if k < a.size else 0.0
            for j in range(k):
                if k - j < b.size:
                    acc -= g[j] * b[k - j]
            g[k] = acc / b[0]
        out.append((p, [g[m - j] for j in range(1, m + 1)]))
    return out


def _rebuild(parts):
    """Sum of principal-part terms as a RationalFunction."""
    if not parts:
        return RationalFunction([0.0])
    den = np.array([1.0 + 0j])
    for p, cs in parts:
        den = npoly.polymul(den, _from_roots([p] * len(cs)))
    num = np.zeros(1, dtype=complex)
    for i, (p, cs) in enumerate(parts):
        rest = np.array([1.0 + 0j])
        for j, (q, cq) in enumerate(parts):
            if j != i:
                rest = npoly.polymul(rest, _from_roots([q] * len(cq)))
        m = len(cs)
        for k in range(1, m + 1):
            term = npoly.polymul(_from_roots([p] * (m - k)), rest)
            num = npoly.polyadd(num, cs[k - 1] * term)
    return RationalFunction(num, den, reduce=False)


def causal_part(f: RationalFunction) -> RationalFunction:
    """[f]_+ : the component whose inverse transform lives at t > 0.

    With the e^{-iWt} convention these are the lower-half-plane pole terms
    of the partial-fraction decomposition; [f]_+ + [f]_- = f exactly.
    """
    return _rebuild(_principal_parts(f, lambda p: p.imag < 0))


def anticausal_part(f: RationalFunction) -> RationalFunction:
    """[f]_- : the component supported at negative times (UHP pole terms)."""
    return _rebuild(_principal_parts(f, lambda p: p.imag > 0))


def _integral_full_line(f: RationalFunction) -> complex:
    """integral over R of f(w) dw/2pi by closing in the upper half plane."""
    if f.is_zero:
        return 0.0 + 0.0j
    if f.num_degree > f.den_degree - 2:
        raise IntegrationError("integrand must decay at least as 1/w^2")
    parts = _principal_parts(f, lambda p: p.imag > 0)
    return 1j * sum(cs[0] for _, cs in parts)


# ----------------------------------------------------------------------
# white-noise model, analytically factored pieces (unit measurement strength)

class _WhitePieces:
    """Scaled white-model polynomials with the plant factor kept exact.

    All members live at unit measurement strength (frequencies divided by
    omega_alpha).  Keeping d_plus analytic sidesteps the ill-conditioned
    coefficient-form splitting of the cross-axis plant pole pairs.
    """

    def __init__(self, mode: ModeParams):
        s = mode.omega_alpha
        self.scale = s
        m = ModeParams(
            omega_alpha=1.0,
            omega_F=mode.omega_F / s,
            omega_x=mode.omega_x / s,
            omega_m=mode.omega_m / s,
            gamma_m=mode.gamma_m / s,
            phi=mode.phi,
            S_a1=mode.S_a1,
            S_a2=mode.S_a2,
        )
        alpha = c = 1.0
        sphi, cphi = np.sin(m.phi), np.cos(m.phi)
        M = alpha**2 * m.S_a1 + 2.0 * m.omega_F**2
        s_xix = 2.0 / m.omega_x**2
        b0 = sphi**2 * m.S_a1 + cphi**2 * (m.S_a2 + c**2 * s_xix)
        self.k0 = (
            alpha**2 * m.S_a1 * cphi**2 * (m.S_a2 + c**2 * s_xix)
            + 2.0 * m.omega_F**2 * b0
        )
        self.d_plus = plant_factor(m)
        dx = npoly.polymul(self.d_plus, np.conj(self.d_plus))
        q4 = b0 * dx
        q4 = npoly.polyadd(q4, np.array([cphi**2 * c**2 * M], dtype=complex))
        q4 = npoly.polyadd(
            q4,
            -2.0 * sphi * cphi * c * alpha * m.S_a1
            * np.array([-m.omega_m**2, 0.0, 1.0], dtype=complex),
        )
        self.q4 = q4
        self.dx = dx
        self.sxy_num = npoly.polyadd(
            np.array([cphi * c * M], dtype=complex),
            -sphi * alpha * m.S_a1 * np.conj(self.d_plus),
        )
        roots4 = _polyroots(q4)
        lower = roots4[roots4.imag < 0]
        if 2 * lower.size != roots4.size:
            raise FactorizationError("output spectrum roots do not split evenly")
        lead = np.sqrt(q4[-1].real)
        self.sy_num = _from_roots(lower, lead)
        # s_y = sy_num/d_plus: minimum phase by construction
        self.s_y = RationalFunction(self.sy_num, self.d_plus, reduce=False)
        den = npoly.polymul(self.d_plus, np.conj(self.sy_num))
        self.f_x = RationalFunction(self.sxy_num, den, reduce=False)
        self.f_p = RationalFunction(
            npoly.polymul([0.0, -1.0j], self.sxy_num), den, reduce=False
        )


# ----------------------------------------------------------------------
# Wiener gain and orthogonality

def _scale_of(spectra: SpectraSet) -> float:
    zz = spectra.S_y.zeros()
    if zz.size == 0:
        zz = spectra.S_y.poles()
    if zz.size == 0:
        return 1.0
    return float(np.exp(np.mean(np.log(np.abs(zz)))))


def wiener_gain(spectra: SpectraSet) -> RationalFunction:
    """Causal optimal filter K_x = [S_xy/s_y~]_+ / s_y for the position."""
    if spectra.mode is not None:
        w = _WhitePieces(spectra.mode)
        k_hat = (w.f_x - anticausal_part(w.f_x)) / w.s_y
        # parameter rescaling carries one amplitude power of the scale
        return k_hat.dilated(1.0 / w.scale) * (1.0 / w.scale)
    s = _scale_of(spectra)
    S_y = spectra.S_y.dilated(s)
    S_xy = spectra.S_xy.dilated(s)
    s_y = spectral_factorize(S_y).s_y
    f = S_xy / s_y.conj_reflected()
    k_hat = (f - anticausal_part(f)) / s_y
    return k_hat.dilated(1.0 / s)


def orthogonality_residual(spectra: SpectraSet, n_freq=200) -> float:
    """sup |[(S_xy - K_x S_y)/s_y~]_+| / sup |S_xy/s_y~| on a probe grid.

    Zero for the optimal causal filter: the estimation residual is then
    uncorrelated with the past record.
    """
    if spectra.mode is not None:
        w = _WhitePieces(spectra.mode)
        s_y, f = w.s_y, w.f_x
        S_y = RationalFunction(w.q4, w.dx, reduce=False)
        S_xy = RationalFunction(w.sxy_num, w.dx, reduce=False)
    else:
        s = _scale_of(spectra)
        S_y = spectra.S_y.dilated(s)
        S_xy = spectra.S_xy.dilated(s)
        s_y = spectral_factorize(S_y).s_y
        f = S_xy / s_y.conj_reflected()
    k_hat = (f - anticausal_part(f)) / s_y
    resid = causal_part((S_xy - k_hat * S_y) / s_y.conj_reflected())
    w_probe = np.geomspace(1e-3, 1e3, n_freq)
    w_probe = np.concatenate([-w_probe[::-1], w_probe])
    top = np.max(np.abs(resid(w_probe)))
    ref = np.max(np.abs(f(w_probe)))
    return float(top / ref)


# ----------------------------------------------------------------------
# conditional moments, numeric

def conditional_moments_numeric(
    spectra: SpectraSet, integrator: str = "auto"
) -> ConditionalMoments:
    """Posterior second moments from the spectral-domain filtering integrals.

    integrator: "residue" (closed-form partial fractions), "quadrature"
    (adaptive integration of the same integrands), or "auto" (residue with
    quadrature fallback).
    """
    if integrator not in ("auto", "residue", "quadrature"):
        raise ValueError(f"unknown integrator {integrator!r}")
    if spectra.mode is not None:
        pieces = _decomposed_integrands_white(spectra.mode)
        s = spectra.mode.omega_alpha
        scale_back = (1.0 / s, s, 1.0)
    else:
        s = _scale_of(spectra)
        pieces = _decomposed_integrands_generic(spectra, s)
        scale_back = (s, s, s)

    if integrator == "quadrature":
        vals = [_integrate_quadrature(d1, anti) for d1, anti in pieces]
    else:
        try:
            vals = [
                0.5 * (_integral_full_line(d1) + _integral_full_line(anti)).real
                for d1, anti in pieces
            ]
        except Exception:
            if integrator == "residue":
                raise
            vals = [_integrate_quadrature(d1, anti) for d1, anti in pieces]
    return ConditionalMoments(
        V_xx=vals[0] * scale_back[0],
        V_pp=vals[1] * scale_back[1],
        V_xp=vals[2] * scale_back[2],
    )


def _decomposed_integrands_white(mode: ModeParams):
    """(D1, anticausal-product) integrand pairs for the white-noise model.

    Everything is evaluated at unit measurement strength (frequencies
    divided by omega_alpha); the caller rescales the moments.  D1 reduces
    to w_a w_b~ k0 / q4 and carries only the four well-separated roots of
    the S_y numerator; the plant factor cancels exactly in closed form.
    """
    w = _WhitePieces(mode)
    m_x = anticausal_part(w.f_x)
    m_p = anticausal_part(w.f_p)
    d1_xx = RationalFunction([w.k0], w.q4, reduce=False)
    d1_pp = RationalFunction([0.0, 0.0, w.k0], w.q4, reduce=False)
    d1_xp = RationalFunction([0.0, 1.0j * w.k0], w.q4, reduce=False)
    return [
        (d1_xx, m_x * m_x.conj_reflected()),
        (d1_pp, m_p * m_p.conj_reflected()),
        (d1_xp, m_x * m_p.conj_reflected()),
    ]


def _decomposed_integrands_generic(spectra: SpectraSet, s: float):
    """Same integrand pairs from an arbitrary (Hermitian) SpectraSet."""
    S_x = spectra.S_x.dilated(s)
    S_p = spectra.S_p.dilated(s)
    S_y = spectra.S_y.dilated(s)
    S_xy = spectra.S_xy.dilated(s)
    S_py = spectra.S_py.dilated(s)
    S_xp = spectra.S_xp.dilated(s)
    s_y = spectral_factorize(S_y).s_y
    syc = s_y.conj_reflected()
    f_x = S_xy / syc
    f_p = S_py / syc
    m_x = anticausal_part(f_x)
    m_p = anticausal_part(f_p)
    d1_xx = S_x - f_x * f_x.conj_reflected()
    d1_pp = S_p - f_p * f_p.conj_reflected()
    d1_xp = S_xp - f_x * f_p.conj_reflected()
    return [
        (d1_xx, m_x * m_x.conj_reflected()),
        (d1_pp, m_p * m_p.conj_reflected()),
        (d1_xp, m_x * m_p.conj_reflected()),
    ]


def _integrate_quadrature(d1, anti, rel_target=1e-9, rel_accept=1e-7):
    """integral over [0, inf) dW/2pi of Re(d1 + anti) via W = t/(1-t)."""
    def integrand(t):
        w = t / (1.0 - t)
        val = d1(w) + anti(w)
        return val.real / (1.0 - t) ** 2 / (2.0 * np.pi)

    val, err = integrate.quad(integrand, 0.0, 1.0, limit=400,
                              epsabs=0.0, epsrel=rel_target)
    if abs(val) > 0 and err / abs(val) > rel_accept:
        raise IntegrationError(
            f"quadrature converged only to {err / abs(val):.2e} relative"
        )
    return val


# ----------------------------------------------------------------------
# conditional moments, closed form (white noise, phase readout, soft pendulum)

def conditional_moments_closed(mode: ModeParams) -> ConditionalMoments:
    """Closed-form posterior moments, valid for gamma_m, omega_m << omega_alpha.

    V_xx = [(1+2zF^2)(1+2zx^2)^3]^{1/4} / (sqrt(2) wa),
    V_pp = wa [(1+2zF^2)^3 (1+2zx^2)]^{1/4} / sqrt(2),
    V_xp = [(1+2zF^2)(1+2zx^2)]^{1/2} / 2,

    with effective zeta^2 including technical laser noise.  Requires
    phase-quadrature readout (phi = 0); warns when the pendulum is not soft
    against the measurement timescale.
    """
    if mode.phi != 0.0:
        raise ValueError("closed form requires phase-quadrature readout (phi = 0)")
    if max(mode.omega_m, mode.gamma_m) > 0.01 * mode.omega_alpha:
        warnings.warn(
            "closed-form moments assume omega_m, gamma_m << omega_alpha; "
            f"got omega_m/omega_alpha = {mode.omega_m / mode.omega_alpha:.3g}, "
            f"gamma_m/omega_alpha = {mode.gamma_m / mode.omega_alpha:.3g}",
            stacklevel=2,
        )
    zf2, zx2 = effective_zetas(mode)
    a = 1.0 + 2.0 * zf2
    b = 1.0 + 2.0 * zx2
    wa = mode.omega_alpha
    return ConditionalMoments(
        V_xx=(a * b**3) ** 0.25 / (np.sqrt(2.0) * wa),
        V_pp=wa * (a**3 * b) ** 0.25 / np.sqrt(2.0),
        V_xp=0.5 * np.sqrt(a * b),
    )


def conditional_moments(mode: ModeParams, method: str = "closed") -> ConditionalMoments:
    """Dispatch: posterior moments by 'closed', 'numeric' or 'riccati' route."""
    if method == "closed":
        return conditional_moments_closed(mode)
    if method == "numeric":
        return conditional_moments_numeric(build_spectra(mode))
    if method == "riccati":
        from .riccati import care_steady_state, to_state_space

        return care_steady_state(to_state_space(mode))
    raise ValueError(f"unknown method {method!r}")

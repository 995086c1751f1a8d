"""Rational functions of the angular frequency with complex coefficients.

This is the carrier type for all spectral densities and filter transfer
functions.  Coefficients are stored in ascending degree, the denominator is
kept monic and common numerator/denominator roots are cancelled on
construction, so downstream factorization and partial-fraction code can rely
on a reduced representation.

Conventions
-----------
A function is *Hermitian-symmetric* when f(-w) = conj(f(w)) on the real
axis; spectra of real observables have this property.  The companion
operation ``conj_reflected`` maps f to f~ with f~(w) = conj(f(conj(w))),
which equals conj(f(w)) for real w and flips poles/zeros across the real
axis.
"""

from __future__ import annotations

import numpy as np
from numpy.polynomial import polynomial as npoly

from .errors import DegreeCapError

# Degree cap: root finding for the white-noise model needs degree <= 6;
# intermediate products in the Wiener chain stay well below twice this.
DEGREE_CAP = 16
_INTERNAL_CAP = 2 * DEGREE_CAP

# Root pairing during cancellation: two roots are "the same" when their
# distance is within the numerically estimated root uncertainty (plus a
# floor for plain rounding).  A fixed tolerance cannot work here: doubled
# near-axis quadruples scatter by ~1e-6 on re-rooting, while legitimate
# high-Q plant structure lives at comparable separations but with
# well-conditioned (tiny-uncertainty) roots.
CANCEL_FLOOR = 1e-9
CANCEL_CAP = 1e-4

# Trailing coefficients are dropped only when exactly zero (padding from
# polynomial addition) or denormal-level garbage.  Trimming relative to the
# largest coefficient would corrupt legitimate wide-span polynomials: a
# quartic with roots at omega_alpha in rad/s units spans ~1e16 between its
# constant and leading terms.  Degree reduction after arithmetic happens
# through root cancellation instead.
_TRIM_FLOOR = 1e-300


def _trim(c):
    c = np.atleast_1d(np.asarray(c, dtype=complex))
    if c.ndim != 1 or c.size == 0:
        raise ValueError("coefficients must be a non-empty 1-d sequence")
    i = c.size
    while i > 1 and abs(c[i - 1]) <= _TRIM_FLOOR:
        i -= 1
    return np.array(c[:i], dtype=complex)


def _polyroots(c):
    c = _trim(c)
    if c.size == 1:
        return np.zeros(0, dtype=complex)
    return npoly.polyroots(c)


def _from_roots(roots, lead=1.0):
    if len(roots) == 0:
        return np.array([lead], dtype=complex)
    return npoly.polyfromroots(np.asarray(roots, dtype=complex)) * lead


def _exact_polydiv(a, b):
    """Quotient a/b when b divides a to rounding accuracy, else None."""
    if b.size > a.size:
        return None
    if b.size == a.size:
        return None  # equal-size case is handled by the caller
    quo, rem = npoly.polydiv(a, b)
    scale = np.max(np.abs(a))
    if np.max(np.abs(rem)) <= 1e-10 * scale:
        return quo
    return None


def _root_uncertainty(coeffs, r):
    """First-order bound on the numerical error of a computed root.

    Perturbing each coefficient by eps*|c_k| moves a simple root by about
    eps * sum |c_k||r|^k / |p'(r)|; for (near-)multiple roots the derivative
    collapses and the estimate correctly blows up.
    """
    dp = npoly.polyval(r, npoly.polyder(coeffs))
    if dp == 0:
        return np.inf
    p_abs = npoly.polyval(abs(r), np.abs(coeffs))
    return coeffs.size * np.finfo(float).eps * p_abs / abs(dp)


class RationalFunction:
    """Ratio of two complex polynomials in the angular frequency.

    Parameters
    ----------
    num, den : sequence of complex
        Polynomial coefficients, ascending degree.  ``den`` defaults to 1.
    reduce : bool
        Cancel near-common roots and normalize; on by default.
    """

    __slots__ = ("num", "den", "_zeros", "_poles")

    def __init__(self, num, den=(1.0,), *, reduce=True):
        num = _trim(num)
        den = _trim(den)
        if den.size == 1 and den[0] == 0:
            raise ZeroDivisionError("denominator is identically zero")
        if max(num.size, den.size) - 1 > _INTERNAL_CAP:
            raise DegreeCapError(
                f"degree {max(num.size, den.size) - 1} exceeds internal cap {_INTERNAL_CAP}"
            )
        self._zeros = None
        self._poles = None
        if not num.any():
            num, den = np.zeros(1, dtype=complex), np.ones(1, dtype=complex)
        elif reduce and den.size > 1:
            num, den = self._cancel(num, den)
        # monic denominator (skip the division when already monic: complex
        # division by 1+0j is not bit-stable, which would break exact
        # same-denominator detection in __add__)
        lead = den[-1]
        if lead != 1.0:
            num = num / lead
            den = den / lead
            den[-1] = 1.0
        if max(num.size, den.size) - 1 > DEGREE_CAP:
            raise DegreeCapError(
                f"degree {max(num.size, den.size) - 1} exceeds cap {DEGREE_CAP}"
            )
        self.num = num
        self.den = den

    @staticmethod
    def _cancel(num, den):
        rn = list(_polyroots(num))
        rd = list(_polyroots(den))
        un = [_root_uncertainty(num, z) for z in rn]
        kept_d = []
        changed = False
        for p in rd:
            scale = max(1.0, abs(p))
            u_p = _root_uncertainty(den, p)
            match = None
            best = np.inf
            for i, z in enumerate(rn):
                d = abs(z - p)
                tol = max(CANCEL_FLOOR * scale,
                          min(8.0 * (u_p + un[i]), CANCEL_CAP * scale))
                if d <= tol and d < best:
                    match, best = i, d
            if match is None:
                kept_d.append(p)
            else:
                rn.pop(match)
                un.pop(match)
                changed = True
        if not changed:
            return num, den
        return _from_roots(rn, num[-1]), _from_roots(kept_d, den[-1])

    # ------------------------------------------------------------------
    # basic queries

    @property
    def num_degree(self):
        return self.num.size - 1

    @property
    def den_degree(self):
        return self.den.size - 1

    @property
    def is_strictly_proper(self):
        return self.num.size < self.den.size or not self.num.any()

    @property
    def is_zero(self):
        return not self.num.any()

    def zeros(self):
        if self._zeros is None:
            self._zeros = _polyroots(self.num)
        return self._zeros

    def poles(self):
        if self._poles is None:
            self._poles = _polyroots(self.den)
        return self._poles

    def __call__(self, omega):
        return npoly.polyval(omega, self.num) / npoly.polyval(omega, self.den)

    # ------------------------------------------------------------------
    # algebra

    def _coerce(self, other):
        if isinstance(other, RationalFunction):
            return other
        if np.isscalar(other):
            return RationalFunction([other], reduce=False)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if other.is_zero:
            return self
        if self.is_zero:
            return other
        # sharing a denominator (or a denominator factor) avoids doubling
        # near-degenerate roots, which the later cancellation could only
        # undo at sqrt(eps) accuracy
        if self.den.size == other.den.size and np.array_equal(self.den, other.den):
            return RationalFunction(npoly.polyadd(self.num, other.num), self.den)
        for a, b in ((self, other), (other, self)):
            quo = _exact_polydiv(b.den, a.den)
            if quo is not None:
                num = npoly.polyadd(npoly.polymul(a.num, quo), b.num)
                return RationalFunction(num, b.den)
        num = npoly.polyadd(
            npoly.polymul(self.num, other.den), npoly.polymul(other.num, self.den)
        )
        return RationalFunction(num, npoly.polymul(self.den, other.den))

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(-self.num, self.den, reduce=False)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if np.isscalar(other):
            return RationalFunction(self.num * other, self.den, reduce=False)
        if not isinstance(other, RationalFunction):
            return NotImplemented
        if self.is_zero or other.is_zero:
            return RationalFunction([0.0])
        return RationalFunction(
            npoly.polymul(self.num, other.num), npoly.polymul(self.den, other.den)
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        if np.isscalar(other):
            return RationalFunction(self.num / other, self.den, reduce=False)
        if not isinstance(other, RationalFunction):
            return NotImplemented
        if other.is_zero:
            raise ZeroDivisionError("division by the zero rational function")
        return RationalFunction(
            npoly.polymul(self.num, other.den), npoly.polymul(self.den, other.num)
        )

    def __rtruediv__(self, other):
        if np.isscalar(other):
            if self.is_zero:
                raise ZeroDivisionError("division by the zero rational function")
            return RationalFunction(other * self.den, self.num)
        return NotImplemented

    # ------------------------------------------------------------------
    # symmetry operations

    def conj_reflected(self):
        """f~ with f~(w) = conj(f(conj w)); equals conj(f) on the real axis."""
        return RationalFunction(np.conj(self.num), np.conj(self.den), reduce=False)

    def reflected(self):
        """f(-w)."""
        sn = (-1.0) ** np.arange(self.num.size)
        sd = (-1.0) ** np.arange(self.den.size)
        return RationalFunction(self.num * sn, self.den * sd, reduce=False)

    def dilated(self, s):
        """g with g(w) = f(s*w), s real positive."""
        if not (np.isrealobj(np.asarray(s)) and s > 0):
            raise ValueError("dilation factor must be real positive")
        kn = s ** np.arange(self.num.size)
        kd = s ** np.arange(self.den.size)
        return RationalFunction(self.num * kn, self.den * kd, reduce=False)

    def is_hermitian(self, tol=1e-9):
        """Check f(-w) = conj(f(w)) on a probe grid of real frequencies."""
        w = _probe_grid(self)
        a = self(-w)
        b = np.conj(self(w))
        scale = np.max(np.abs(b)) or 1.0
        return bool(np.max(np.abs(a - b)) <= tol * scale)

    def __repr__(self):
        return f"RationalFunction(num={self.num!r}, den={self.den!r})"


def _probe_grid(rf, n=40):
    """Log-spaced real frequencies spanning the root scale of rf."""
    rr = np.concatenate([rf.zeros(), rf.poles()])
    scale = np.median(np.abs(rr)) if rr.size else 1.0
    scale = scale if scale > 0 else 1.0
    return np.geomspace(scale * 1e-3, scale * 1e3, n)

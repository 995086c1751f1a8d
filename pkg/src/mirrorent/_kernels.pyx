# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled logarithmic-negativity kernels (hot path of the optimizer).

Twin of mirrorent._kernels_py with identical signatures; the scalar entry
points dominate the simplex refinements and threshold bisections.
"""

from libc.math cimport INFINITY, log2, sqrt

import numpy as np

BACKEND_NAME = "compiled"


cdef inline void _closed(double wa, double zf2, double zx2,
                         double *vxx, double *vpp, double *vxp) nogil:
    cdef double a = 1.0 + 2.0 * zf2
    cdef double b = 1.0 + 2.0 * zx2
    cdef double rt2 = sqrt(2.0)
    vxx[0] = sqrt(sqrt(a * b * b * b)) / (rt2 * wa)
    vpp[0] = wa * sqrt(sqrt(a * a * a * b)) / rt2
    vxp[0] = 0.5 * sqrt(a * b)


cdef double _logneg(double wa_c, double wa_d, double w_f, double w_x,
                    double dzf_c, double dzx_c, double dzf_d, double dzx_d) nogil:
    cdef double zf2_c = (w_f / wa_c) ** 2 + dzf_c
    cdef double zx2_c = (wa_c / w_x) ** 2 + dzx_c
    cdef double zf2_d = (w_f / wa_d) ** 2 + dzf_d
    cdef double zx2_d = (wa_d / w_x) ** 2 + dzx_d
    if zf2_c < 0.0 or zx2_c < 0.0 or zf2_d < 0.0 or zx2_d < 0.0:
        return -1.0  # sentinel, mapped to ValueError by the wrapper
    cdef double vxx_c, vpp_c, vxp_c, vxx_d, vpp_d, vxp_d
    _closed(wa_c, zf2_c, zx2_c, &vxx_c, &vpp_c, &vxp_c)
    _closed(wa_d, zf2_d, zx2_d, &vxx_d, &vpp_d, &vxp_d)

    cdef double a_s = 0.25 * (vxx_c + vxx_d)
    cdef double b_s = 0.5 * (vxp_c + vxp_d)
    cdef double c_s = vpp_c + vpp_d
    cdef double a_m = 0.25 * (vxx_c - vxx_d)
    cdef double b_m = 0.5 * (vxp_c - vxp_d)
    cdef double c_m = vpp_c - vpp_d
    cdef double sigma = 2.0 * ((a_s * c_s - b_s * b_s) - (a_m * c_m - b_m * b_m))
    cdef double det_v = (vxx_c * vpp_c - vxp_c * vxp_c) * (vxx_d * vpp_d - vxp_d * vxp_d)
    cdef double disc = sigma * sigma - 4.0 * det_v
    if disc < 0.0:
        disc = 0.0
    cdef double s2 = 0.5 * (sigma - sqrt(disc))
    if s2 <= 0.0:
        return INFINITY
    cdef double en = -0.5 * log2(4.0 * s2)
    return en if en > 0.0 else 0.0


def closed_moments(double wa, double zf2, double zx2):
    """(V_xx, V_pp, V_xp) of one channel from effective zeta^2 (hbar = m = 1)."""
    cdef double vxx, vpp, vxp
    _closed(wa, zf2, zx2, &vxx, &vpp, &vxp)
    return vxx, vpp, vxp


def logneg_closed(double wa_c, double wa_d, double w_f, double w_x,
                  double dzf_c, double dzx_c, double dzf_d, double dzx_d):
    """E_N of the assembled two-mirror state, fused closed-form path."""
    cdef double out = _logneg(wa_c, wa_d, w_f, w_x, dzf_c, dzx_c, dzf_d, dzx_d)
    if out < 0.0:
        raise ValueError("effective zeta^2 must be nonnegative")
    return out


def logneg_grid(wa_c, wa_d, double w_f, double w_x,
                double dzf_c, double dzx_c, double dzf_d, double dzx_d):
    """E_N over the outer grid wa_c x wa_d; returns an (nc, nd) array."""
    cdef double[::1] ac = np.ascontiguousarray(wa_c, dtype=np.float64)
    cdef double[::1] ad = np.ascontiguousarray(wa_d, dtype=np.float64)
    out_arr = np.empty((ac.shape[0], ad.shape[0]), dtype=np.float64)
    cdef double[:, ::1] out = out_arr
    cdef Py_ssize_t i, j
    cdef double v
    with nogil:
        for i in range(ac.shape[0]):
            for j in range(ad.shape[0]):
                v = _logneg(ac[i], ad[j], w_f, w_x, dzf_c, dzx_c, dzf_d, dzx_d)
                out[i, j] = v
    if np.any(out_arr < 0.0):
        raise ValueError("effective zeta^2 must be nonnegative")
    return out_arr

"""Pure-Python/numpy twin of the compiled logarithmic-negativity kernels.

Same call signatures as the Cython module; selected by mirrorent._backend
when the extension is unavailable or MIRRORENT_PURE_PYTHON is set.
"""

import math

import numpy as np

BACKEND_NAME = "python"


def closed_moments(wa, zf2, zx2):
    """(V_xx, V_pp, V_xp) of one channel from effective zeta^2 (hbar = m = 1)."""
    a = 1.0 + 2.0 * zf2
    b = 1.0 + 2.0 * zx2
    vxx = (a * b * b * b) ** 0.25 / (math.sqrt(2.0) * wa)
    vpp = wa * (a * a * a * b) ** 0.25 / math.sqrt(2.0)
    vxp = 0.5 * math.sqrt(a * b)
    return vxx, vpp, vxp


def logneg_closed(wa_c, wa_d, w_f, w_x, dzf_c, dzx_c, dzf_d, dzx_d):
    """E_N of the assembled two-mirror state, fused closed-form path.

    dz* are the additive laser-noise corrections to the zeta^2 of each
    channel ((S - 1)/2 per quadrature, zero for vacuum).
    """
    zf2_c = (w_f / wa_c) ** 2 + dzf_c
    zx2_c = (wa_c / w_x) ** 2 + dzx_c
    zf2_d = (w_f / wa_d) ** 2 + dzf_d
    zx2_d = (wa_d / w_x) ** 2 + dzx_d
    if zf2_c < 0.0 or zx2_c < 0.0 or zf2_d < 0.0 or zx2_d < 0.0:
        raise ValueError("effective zeta^2 must be nonnegative")
    vxx_c, vpp_c, vxp_c = closed_moments(wa_c, zf2_c, zx2_c)
    vxx_d, vpp_d, vxp_d = closed_moments(wa_d, zf2_d, zx2_d)

    a_s = 0.25 * (vxx_c + vxx_d)
    b_s = 0.5 * (vxp_c + vxp_d)
    c_s = vpp_c + vpp_d
    a_m = 0.25 * (vxx_c - vxx_d)
    b_m = 0.5 * (vxp_c - vxp_d)
    c_m = vpp_c - vpp_d
    det_ee = a_s * c_s - b_s * b_s
    det_en = a_m * c_m - b_m * b_m
    sigma = 2.0 * (det_ee - det_en)
    # det V factorizes into the two single-mode uncertainty products
    det_v = (vxx_c * vpp_c - vxp_c**2) * (vxx_d * vpp_d - vxp_d**2)
    disc = sigma * sigma - 4.0 * det_v
    if disc < 0.0:
        disc = 0.0
    s2 = 0.5 * (sigma - math.sqrt(disc))
    if s2 <= 0.0:
        return math.inf
    return max(0.0, -0.5 * math.log2(4.0 * s2))


def logneg_grid(wa_c, wa_d, w_f, w_x, dzf_c, dzx_c, dzf_d, dzx_d):
    """E_N over the outer grid wa_c x wa_d; returns an (nc, nd) array."""
    wa_c = np.asarray(wa_c, dtype=float)[:, None]
    wa_d = np.asarray(wa_d, dtype=float)[None, :]
    a_c = 1.0 + 2.0 * ((w_f / wa_c) ** 2 + dzf_c)
    b_c = 1.0 + 2.0 * ((wa_c / w_x) ** 2 + dzx_c)
    a_d = 1.0 + 2.0 * ((w_f / wa_d) ** 2 + dzf_d)
    b_d = 1.0 + 2.0 * ((wa_d / w_x) ** 2 + dzx_d)
    rt2 = math.sqrt(2.0)
    vxx_c = (a_c * b_c**3) ** 0.25 / (rt2 * wa_c)
    vpp_c = wa_c * (a_c**3 * b_c) ** 0.25 / rt2
    vxp_c = 0.5 * np.sqrt(a_c * b_c)
    vxx_d = (a_d * b_d**3) ** 0.25 / (rt2 * wa_d)
    vpp_d = wa_d * (a_d**3 * b_d) ** 0.25 / rt2
    vxp_d = 0.5 * np.sqrt(a_d * b_d)

    a_s = 0.25 * (vxx_c + vxx_d)
    b_s = 0.5 * (vxp_c + vxp_d)
    c_s = vpp_c + vpp_d
    a_m = 0.25 * (vxx_c - vxx_d)
    b_m = 0.5 * (vxp_c - vxp_d)
    c_m = vpp_c - vpp_d
    sigma = 2.0 * ((a_s * c_s - b_s**2) - (a_m * c_m - b_m**2))
    det_v = (vxx_c * vpp_c - vxp_c**2) * (vxx_d * vpp_d - vxp_d**2)
    disc = np.maximum(sigma**2 - 4.0 * det_v, 0.0)
    s2 = 0.5 * (sigma - np.sqrt(disc))
    return np.maximum(0.0, -0.5 * np.log2(np.maximum(4.0 * s2, 1e-300)))

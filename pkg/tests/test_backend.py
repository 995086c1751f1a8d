import os
import subprocess
import sys

import numpy as np
import pytest

import mirrorent
from mirrorent import _kernels_py
from mirrorent.entangle import assemble, log_negativity
from mirrorent.params import ModeParams
from mirrorent.wiener import conditional_moments_closed

try:
    from mirrorent import _kernels
except ImportError:
    _kernels = None

needs_compiled = pytest.mark.skipif(_kernels is None,
                                    reason="compiled kernels unavailable")


def random_args(rng):
    return (
        float(np.exp(rng.uniform(-2, 2))),
        float(np.exp(rng.uniform(-2, 2))),
        1.0,
        float(np.exp(rng.uniform(np.log(2.0), np.log(30.0)))),
        float(rng.uniform(0, 3)),
        float(rng.uniform(0, 3)),
        float(rng.uniform(0, 1)),
        float(rng.uniform(0, 1)),
    )


def test_backend_reported():
    assert mirrorent.BACKEND in ("python", "compiled")


@needs_compiled
def test_scalar_kernels_agree():
    rng = np.random.default_rng(71)
    for _ in range(500):
        args = random_args(rng)
        assert _kernels.logneg_closed(*args) == pytest.approx(
            _kernels_py.logneg_closed(*args), abs=1e-12)


@needs_compiled
def test_grid_kernels_agree():
    g = np.geomspace(0.03, 70.0, 50)
    a = _kernels_py.logneg_grid(g, g, 1.0, 5.522, 0.1, 0.2, 0.0, 0.0)
    b = _kernels.logneg_grid(g, g, 1.0, 5.522, 0.1, 0.2, 0.0, 0.0)
    np.testing.assert_allclose(a, b, atol=1e-12)


@needs_compiled
def test_closed_moments_agree():
    rng = np.random.default_rng(72)
    for _ in range(100):
        wa = float(np.exp(rng.uniform(-2, 2)))
        zf2, zx2 = rng.uniform(0, 9, size=2)
        np.testing.assert_allclose(_kernels.closed_moments(wa, zf2, zx2),
                                   _kernels_py.closed_moments(wa, zf2, zx2),
                                   rtol=1e-14)


@pytest.mark.parametrize("mod", [m for m in (_kernels_py, _kernels) if m is not None],
                         ids=lambda m: m.BACKEND_NAME)
def test_fused_kernel_matches_object_path(mod):
    """The fused optimizer kernel must reproduce the full assemble +
    log-negativity pipeline on the closed-form moments."""
    rng = np.random.default_rng(73)
    for _ in range(50):
        wa_c, wa_d = np.exp(rng.uniform(-1.5, 1.5, size=2))
        wf = 1.0
        wx = float(np.exp(rng.uniform(np.log(2.0), np.log(20.0))))
        mc = conditional_moments_closed(ModeParams(omega_alpha=wa_c, omega_F=wf,
                                                   omega_x=wx))
        md = conditional_moments_closed(ModeParams(omega_alpha=wa_d, omega_F=wf,
                                                   omega_x=wx))
        reference = log_negativity(assemble(mc, md))["E_N"]
        fused = mod.logneg_closed(wa_c, wa_d, wf, wx, 0.0, 0.0, 0.0, 0.0)
        assert fused == pytest.approx(reference, abs=1e-12)


def test_kernel_rejects_subvacuum():
    with pytest.raises(ValueError):
        _kernels_py.logneg_closed(1.0, 1.0, 0.01, 10.0, -0.6, 0.0, 0.0, 0.0)


def test_env_var_forces_python_backend():
    code = "import mirrorent; print(mirrorent.BACKEND)"
    env = {**os.environ, "MIRRORENT_PURE_PYTHON": "1"}
    out = subprocess.run([sys.executable, "-c", code], env=env,
                         capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"

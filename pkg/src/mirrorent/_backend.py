"""Kernel backend selection: compiled extension with pure-Python fallback.

Set MIRRORENT_PURE_PYTHON=1 to force the fallback (useful for benchmarking
and debugging); otherwise the compiled module is used when importable.
"""

import os

if os.environ.get("MIRRORENT_PURE_PYTHON"):
    from . import _kernels_py as kernels
else:
    try:
        from . import _kernels as kernels  # type: ignore[attr-defined]
    except ImportError:
        from . import _kernels_py as kernels

BACKEND = kernels.BACKEND_NAME


def get_kernels():
    return kernels

"""Kernel backend selection.

The compiled extension is preferred when it imported cleanly; setting the
environment variable ``FCQBM_PURE_PYTHON=1`` before import forces the numpy
fallback (useful for benchmarking and debugging).
"""

import os

if os.environ.get("FCQBM_PURE_PYTHON", "") not in ("", "0"):
    from . import _kernels_py as kernels
else:
    try:
        from . import _kernels as kernels  # type: ignore[attr-defined]
    except ImportError:
        from . import _kernels_py as kernels

COMPILED: bool = kernels.COMPILED


def backend_name() -> str:
    return "compiled" if COMPILED else "python"

"""Kernel backend selection.

The compiled extension is preferred when it is importable; the pure-numpy
module is the fallback.  Set ``OCTAFRAME_PURE_PYTHON=1`` to force the
fallback (used by the benchmark and by tests that compare the two).
"""

from __future__ import annotations

import os

from . import _kernels_py

if os.environ.get("OCTAFRAME_PURE_PYTHON", "0") not in ("", "0"):
    kernels = _kernels_py
else:
    try:
        from . import _kernels as kernels  # type: ignore[no-redef]
    except ImportError:
        kernels = _kernels_py


def backend_name() -> str:
    """Name of the active kernel backend: "cython" or "python"."""
    return kernels.BACKEND_NAME

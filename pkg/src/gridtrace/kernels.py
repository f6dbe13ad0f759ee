"""Kernel backend selection.

The compiled extension is used when it was built; otherwise, or when
``GRIDTRACE_PURE_PYTHON`` is set to a non-empty value, the pure-Python
implementation is loaded. Both expose the same three functions.
"""
from __future__ import annotations

import os

from . import _kernels_py

if os.environ.get("GRIDTRACE_PURE_PYTHON"):
    _impl = _kernels_py
else:
    try:
        from . import _kernels as _impl  # type: ignore[attr-defined]
    except ImportError:
        _impl = _kernels_py

BACKEND = "cython" if _impl is not _kernels_py else "python"

min_dist_matrix = _impl.min_dist_matrix
nearest_owner = _impl.nearest_owner
expand_paths = _impl.expand_paths


def backends() -> dict:
    """Every importable backend, keyed by name."""
    found = {"python": _kernels_py}
    try:
        from . import _kernels  # type: ignore[attr-defined]
    except ImportError:
        pass
    else:
        found["cython"] = _kernels
    return found

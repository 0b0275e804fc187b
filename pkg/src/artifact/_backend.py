"""Kernel backend selection.

The compiled ``_core`` extension is used when importable; otherwise the
numpy fallback in ``_pycore``.  Set ``QDL_BACKEND=python`` to force the
fallback (used by the benchmark and by the parity tests).
"""

from __future__ import annotations

import os

from . import _pycore

_core = None
if os.environ.get("QDL_BACKEND", "").lower() != "python":
    try:
        from . import _core  # type: ignore[attr-defined]
    except ImportError:  # extension not built
        _core = None

BACKEND = "cython" if _core is not None else "python"
kernels = _core if _core is not None else _pycore

gauss_sum = kernels.gauss_sum
span_elements = kernels.span_elements
cubic_diff_counts = kernels.cubic_diff_counts
sym_block = kernels.sym_block
kappa_sum = kernels.kappa_sum
sym_tables = _pycore.sym_tables

__all__ = [
    "BACKEND",
    "gauss_sum",
    "span_elements",
    "cubic_diff_counts",
    "sym_block",
    "kappa_sum",
    "sym_tables",
]

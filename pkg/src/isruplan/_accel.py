"""Kernel backend selection: compiled extension when present, numpy otherwise.

Set ISRUPLAN_PURE_PYTHON=1 to force the numpy backend even when the
extension is importable.
"""

from __future__ import annotations

import os

from . import _kernels_py

if os.environ.get("ISRUPLAN_PURE_PYTHON"):
    kernels = _kernels_py
else:
    try:
        from . import _kernels as kernels  # type: ignore[attr-defined]
    except ImportError:
        kernels = _kernels_py

BACKEND = kernels.BACKEND

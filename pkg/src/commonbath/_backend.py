"""Selects the stepping kernels at import time.

The compiled Cython kernels are used when importable; otherwise the numpy
fallback takes over.  Set ``COMMONBATH_PURE_PYTHON=1`` to force the fallback
(useful for benchmarking and for debugging the kernels against each other).
"""

from __future__ import annotations

import os

if os.environ.get("COMMONBATH_PURE_PYTHON"):
    from . import _stepping_py as kernels
else:
    try:
        from . import _stepping as kernels  # type: ignore[attr-defined]
    except ImportError:
        from . import _stepping_py as kernels


def backend_name() -> str:
    """Either "compiled" or "python"."""
    return kernels.BACKEND_NAME

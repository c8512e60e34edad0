"""Numeric inner loops with a numba fast path and a pure-numpy fallback.

Set ``ZCWELL_DISABLE_NUMBA=1`` before import to force the numpy path.
"""
import os

from . import _numpy

numpy_kernels = _numpy
numba_kernels = None

if os.environ.get("ZCWELL_DISABLE_NUMBA", "").strip().lower() not in ("1", "true", "yes", "on"):
    try:
        from . import _numba as numba_kernels
    except ImportError:  # numba missing or broken
        numba_kernels = None

using_numba = numba_kernels is not None
BACKEND = "numba" if using_numba else "numpy"
_active = numba_kernels if using_numba else numpy_kernels

sturm_count = _active.sturm_count
bisect_lowest = _active.bisect_lowest
solve_shifted = _active.solve_shifted
ft_cusp_sum = _active.ft_cusp_sum

__all__ = [
    "BACKEND",
    "using_numba",
    "numpy_kernels",
    "numba_kernels",
    "sturm_count",
    "bisect_lowest",
    "solve_shifted",
    "ft_cusp_sum",
]

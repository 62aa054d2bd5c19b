"""Kernel dispatch for the per-bin enhancement recursion.

The streaming loop (correlation tracking, SNR recursion and one
Hermitian solve per bin per frame) dominates runtime, so it ships in two
numerically interchangeable implementations: a numba-jitted one and a
pure-numpy one vectorized over bins.  The numba path is used when numba
imports cleanly; set ``MFSE_DISABLE_NUMBA=1`` to force the numpy path.
``benchmarks/bench_kernels.py`` compares the two.
"""

import os

from . import numpy_impl


def numba_disabled():
    return os.environ.get("MFSE_DISABLE_NUMBA", "").strip().lower() in {"1", "true", "yes", "on"}


BACKEND = "numpy"
enhance_bins = numpy_impl.enhance_bins
if not numba_disabled():
    try:
        from . import numba_impl
    except ImportError:
        numba_impl = None
    else:
        BACKEND = "numba"
        enhance_bins = numba_impl.enhance_bins
else:
    numba_impl = None

__all__ = ["enhance_bins", "BACKEND", "numpy_impl", "numba_impl", "numba_disabled"]

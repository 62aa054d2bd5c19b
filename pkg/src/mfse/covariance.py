"""Recursive correlation-matrix estimation per time-frequency bin.

The noise matrix is smoothed with an SPP-dependent factor: high speech
presence freezes the estimate, low presence lets the current outer
product in with weight ``1 - alpha_n``.  The noisy matrix uses a fixed
smoothing constant.  Diagonal loading is relative to ``trace/N`` so the
conditioning floor is invariant to input gain.
"""

from dataclasses import dataclass

import numpy as np


@dataclass
class SmoothingParams:
    alpha_n: float = 0.98
    lambda_y: float = 0.92
    delta: float = 0.04

    def __post_init__(self):
        if not 0.0 < self.alpha_n < 1.0:
            raise ValueError("alpha_n must be in (0, 1)")
        if not 0.0 < self.lambda_y < 1.0:
            raise ValueError("lambda_y must be in (0, 1)")
        if self.delta < 0.0:
            raise ValueError("delta must be >= 0")


def init_covariance(power, n_taps):
    """Scaled-identity starting matrix for the recursions."""
    return float(power) * np.eye(n_taps, dtype=np.complex128)


def update_noise_cov(prev, y, spp, params):
    """One SPP-driven recursion step of the noise correlation matrix.

    The effective smoothing factor is ``alpha_n + (1 - alpha_n) * spp``:
    ``spp = 1`` returns ``prev`` unchanged, ``spp = 0`` smooths with
    ``alpha_n``.
    """
    if not 0.0 <= spp <= 1.0:
        raise ValueError("invalid probability")
    lam = params.alpha_n + (1.0 - params.alpha_n) * spp
    return lam * prev + (1.0 - lam) * np.outer(y, np.conj(y))


def update_noisy_cov(prev, y, params):
    """One fixed-constant recursion step of the noisy correlation matrix."""
    lam = params.lambda_y
    return lam * prev + (1.0 - lam) * np.outer(y, np.conj(y))


def regularize(m, delta):
    """Diagonal loading relative to the mean diagonal power.

    Adds ``delta * trace(m)/N`` to the diagonal; scale-invariant, so
    ``regularize(c*m) == c*regularize(m)`` for ``c > 0``.
    """
    n = m.shape[0]
    tr = float(np.trace(m).real)
    if tr < 0.0:
        raise ValueError("not PSD")
    return m + (delta * tr / n) * np.eye(n, dtype=m.dtype)

"""Multi-frame MVDR / MPDR filter computation and application.

Both filters solve the same distortionless minimization,
``h = M^-1 g / (g^H M^-1 g)``, differing only in which correlation
matrix they whiten against: the noise matrix (MVDR) or the noisy matrix
(MPDR).  With exact inputs the two are equivalent; with estimates they
are not, which is the whole point of comparing them.
"""

import numpy as np
import scipy.linalg


def _hermitian_solve(a, b):
    """Solve ``a x = b`` for Hermitian positive-definite ``a``.

    Cholesky first (cheapest for the per-frame hot path), pivoted LU as
    fallback; non-finite results are treated as a failed solve.
    """
    try:
        c, low = scipy.linalg.cho_factor(a, lower=True, check_finite=False)
        x = scipy.linalg.cho_solve((c, low), b, check_finite=False)
    except (np.linalg.LinAlgError, scipy.linalg.LinAlgError, ValueError):
        try:
            x = np.linalg.solve(a, b)
        except np.linalg.LinAlgError as exc:
            raise np.linalg.LinAlgError("singular correlation matrix") from exc
    if not np.all(np.isfinite(x)):
        raise np.linalg.LinAlgError("singular correlation matrix")
    return x


def mfmvdr(phi_n_reg, gamma_x):
    """Multi-frame MVDR filter from a regularized noise correlation matrix.

    Minimizes output noise power subject to unit response on the speech
    IFC vector; computed via a Hermitian solve, never an explicit
    inverse.  Raises ``numpy.linalg.LinAlgError`` ("singular correlation
    matrix") when the solve fails, signalling insufficient loading.
    """
    z = _hermitian_solve(phi_n_reg, gamma_x)
    denom = np.vdot(gamma_x, z)
    if not np.isfinite(denom) or denom.real <= 0.0:
        raise np.linalg.LinAlgError("singular correlation matrix")
    return z / denom


def mfmpdr(phi_y_reg, gamma_x):
    """Multi-frame MPDR filter: as MVDR but whitening against the noisy matrix."""
    return mfmvdr(phi_y_reg, gamma_x)


def apply_filter(h, y):
    """Filter output ``h^H y`` for one time-frequency bin."""
    if h.shape != y.shape:
        raise ValueError("filter/vector length mismatch")
    return np.vdot(h, y)

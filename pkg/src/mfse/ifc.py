"""Interframe-correlation (IFC) vector estimation.

An IFC vector holds the normalized correlation of a bin's current STFT
coefficient with its N-1 predecessors; its first element is 1 by
definition.  The speech IFC vector is recovered from the noisy IFC
vector, the analytic mean noise IFC vector and the a-priori SNR.
"""

from dataclasses import dataclass, field

import numpy as np


def noisy_ifc(phi_y):
    """Noisy IFC vector: first column of the matrix over its (0, 0) power.

    The leading element is pinned to exactly 1 so downstream identities
    hold bit-exactly.
    """
    psd = phi_y[0, 0].real
    if psd == 0.0:
        raise ValueError("zero noisy PSD")
    vec = np.asarray(phi_y[:, 0] / psd, dtype=np.complex128)
    vec[0] = 1.0
    return vec


def window_overlap_correlation(window, lag_samples):
    """Normalized window autocorrelation at an integer sample lag."""
    m = window.size
    if lag_samples >= m:
        return 0.0
    num = np.sum(window[: m - lag_samples] * window[lag_samples:])
    return float(num / np.sum(window * window))


def mean_noise_ifc(cfg, bin_k, n_taps):
    """Mean noise IFC vector for one frequency bin.

    For stationary white noise the expected interframe correlation depends
    only on the analysis window overlap and the bin's phase advance per
    hop: element n is ``exp(-2j*pi*k*n*hop/frame_len)`` times the window
    overlap at lag ``n*hop``.  Lags of a full frame or more are zero.
    The phase sign matches the forward-DFT convention of
    :func:`mfse.stft.analyze` and is pinned by a Monte-Carlo regression
    test over white-noise frames.
    """
    lags = np.arange(n_taps)
    rho = np.array([window_overlap_correlation(cfg.window, n * cfg.hop) for n in lags])
    phase = np.exp(-2.0j * np.pi * bin_k * lags * cfg.hop / cfg.frame_len)
    vec = phase * rho
    vec[0] = 1.0
    return vec


def mean_noise_ifc_grid(cfg, n_taps):
    """Mean noise IFC vectors for all bins, stacked as (num_bins, n_taps)."""
    return np.stack([mean_noise_ifc(cfg, k, n_taps) for k in range(cfg.num_bins)])


@dataclass
class AprioriSnrState:
    """Decision-directed a-priori SNR recursion state.

    ``prev_speech_power`` holds |X_hat|^2 of the previous frame (scalar or
    one value per bin); the enhancement loop refreshes it after filtering.
    The floor keeps the speech-IFC correction from exploding in
    noise-only frames.
    """

    lambda_dda: float = 0.97
    xi_floor: float = 10.0 ** -1.5
    prev_speech_power: float = 0.0

    def __post_init__(self):
        if not 0.0 < self.lambda_dda < 1.0:
            raise ValueError("lambda_dda must be in (0, 1)")
        if self.xi_floor <= 0.0:
            raise ValueError("xi_floor must be > 0")


def update_apriori_snr(state, noisy_power, noise_psd, noise_psd_prev):
    """Decision-directed a-priori SNR estimate for the current frame.

    Blends the previous frame's enhanced speech power over the previous
    noise PSD with the maximum-likelihood term ``max(|Y|^2/psd - 1, 0)``,
    then applies the floor.  Scalar or per-bin arrays.
    """
    lam = state.lambda_dda
    ml = np.maximum(noisy_power / noise_psd - 1.0, 0.0)
    xi = lam * (state.prev_speech_power / noise_psd_prev) + (1.0 - lam) * ml
    xi = np.maximum(xi, state.xi_floor)
    return float(xi) if np.ndim(xi) == 0 else xi


def speech_ifc(gamma_y, gamma_n_mean, xi):
    """Speech IFC vector from the noisy IFC vector and mean noise IFC vector.

    Computes ``gamma_y + (gamma_y - mu)/xi``, the SNR-weighted removal of
    the noise contribution.  When both inputs lead with exactly 1 the
    output leading element is exactly 1 as well.
    """
    return gamma_y + (gamma_y - gamma_n_mean) / xi

"""Speech presence probability estimators.

Three sources are supported: the model-based estimator assuming complex
Gaussian speech/noise coefficients, and two estimators derived from
speech/noise ratio masks (the plain speech mask, and the speech mask
renormalized by the mask-pair norm).
"""

from dataclasses import dataclass

import numpy as np

SQRT_HALF = 1.0 / np.sqrt(2.0)


@dataclass
class SppModelParams:
    """Parameters of the model-based estimator.

    ``prior_ratio`` is P(speech absent)/P(speech present); ``xi_h1`` is the
    typical a-priori SNR during speech presence (linear, default 15 dB).
    """

    prior_ratio: float = 1.0
    xi_h1: float = 10.0 ** 1.5

    def __post_init__(self):
        if self.prior_ratio <= 0.0:
            raise ValueError("prior_ratio must be > 0")
        if self.xi_h1 <= 0.0:
            raise ValueError("xi_h1 must be > 0")


@dataclass
class MaskGrid:
    """Real-valued speech/noise mask planes over (bin, frame), in [0, 1]."""

    speech: np.ndarray
    noise: np.ndarray

    def __post_init__(self):
        self.speech = np.asarray(self.speech, dtype=np.float64)
        self.noise = np.asarray(self.noise, dtype=np.float64)
        if self.speech.shape != self.noise.shape or self.speech.ndim != 2:
            raise ValueError("mask planes must share a 2-D shape")
        for plane in (self.speech, self.noise):
            if not np.all(np.isfinite(plane)):
                raise ValueError("mask out of range")
            if plane.min() < 0.0 or plane.max() > 1.0:
                raise ValueError("mask out of range")

    @property
    def shape(self):
        return self.speech.shape


def spp_model(noisy_power, noise_psd_prev, params=None):
    """Model-based SPP from the current noisy power and previous noise PSD.

    Accepts scalars or arrays (broadcast).  Strictly increasing in
    ``noisy_power``; equals ``1/(1 + prior_ratio*(1+xi_h1))`` at zero power
    and tends to 1 for large power/PSD ratios.
    """
    if params is None:
        params = SppModelParams()
    noisy_power = np.asarray(noisy_power, dtype=np.float64)
    noise_psd_prev = np.asarray(noise_psd_prev, dtype=np.float64)
    if np.any(noise_psd_prev <= 0.0):
        raise ValueError("invalid noise PSD")
    glr = params.prior_ratio * (1.0 + params.xi_h1) * np.exp(
        -(noisy_power / noise_psd_prev) * params.xi_h1 / (1.0 + params.xi_h1)
    )
    out = 1.0 / (1.0 + glr)
    return float(out) if out.ndim == 0 else out


def ideal_masks(clean, noise):
    """Oracle speech/noise ratio masks from the true signal components.

    Per bin: ``sqrt(|X|^2 / (|X|^2 + |N|^2))`` and the noise counterpart,
    so the squared masks sum to 1.  Zero-energy bins map to ``1/sqrt(2)``
    in both planes, preserving that identity.
    """
    if clean.data.shape != noise.data.shape:
        raise ValueError("grids must share dimensions")
    px = np.abs(clean.data) ** 2
    pn = np.abs(noise.data) ** 2
    total = px + pn
    dead = total == 0.0
    safe = np.where(dead, 1.0, total)
    speech = np.sqrt(px / safe)
    noise_m = np.sqrt(pn / safe)
    speech[dead] = SQRT_HALF
    noise_m[dead] = SQRT_HALF
    return MaskGrid(np.minimum(speech, 1.0), np.minimum(noise_m, 1.0))


def spp_from_masks(masks, variant):
    """SPP grid derived from a mask pair; the SPP lands in the speech plane.

    ``"N1"`` uses the speech mask directly.  ``"N2"`` renormalizes it by
    the mask-pair norm, which only differs when the masks do not satisfy
    the unit-norm identity (estimated masks generally do not).  Bins where
    both masks are zero give SPP 0 under N2.
    """
    if variant not in ("N1", "N2"):
        raise ValueError(f"unknown SPP variant: {variant!r}")
    mx = masks.speech
    if variant == "N1":
        spp = mx.copy()
    else:
        norm = np.sqrt(mx * mx + masks.noise * masks.noise)
        spp = np.divide(mx, norm, out=np.zeros_like(mx), where=norm > 0.0)
    spp = np.clip(spp, 0.0, 1.0)
    return MaskGrid(spp, 1.0 - spp)

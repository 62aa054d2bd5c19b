"""Single-microphone multi-frame MVDR / MPDR speech enhancement.

The engine operates per time-frequency bin of a high-resolution STFT
(4 ms frames, 1 ms hop): noisy and noise correlation matrices over the
last N frames are tracked recursively, the speech interframe-correlation
vector is estimated from them, and a distortionless multi-frame filter
is solved and applied every frame.  Speech presence probability (SPP)
steers the noise-matrix smoothing and can come from the built-in
model-based estimator or from externally supplied speech/noise masks.
"""

from .stft import StftConfig, SpectrogramGrid, analyze, synthesize
from .covariance import SmoothingParams, update_noise_cov, update_noisy_cov, regularize
from .spp import SppModelParams, MaskGrid, spp_model, ideal_masks, spp_from_masks
from .ifc import mean_noise_ifc, noisy_ifc, speech_ifc, update_apriori_snr, AprioriSnrState
from .mffilter import mfmvdr, mfmpdr, apply_filter
from .masks import read_masks, write_masks
from .metrics import MetricConfig, fwssnr, segsnr
from .pipeline import EnhanceConfig, Utterance, enhance, mix_at_snr, oracle_spp

__version__ = "0.1.0"

__all__ = [
    "StftConfig", "SpectrogramGrid", "analyze", "synthesize",
    "SmoothingParams", "update_noise_cov", "update_noisy_cov", "regularize",
    "SppModelParams", "MaskGrid", "spp_model", "ideal_masks", "spp_from_masks",
    "mean_noise_ifc", "noisy_ifc", "speech_ifc", "update_apriori_snr", "AprioriSnrState",
    "mfmvdr", "mfmpdr", "apply_filter",
    "read_masks", "write_masks",
    "MetricConfig", "fwssnr", "segsnr",
    "EnhanceConfig", "Utterance", "enhance", "mix_at_snr", "oracle_spp",
    "__version__",
]

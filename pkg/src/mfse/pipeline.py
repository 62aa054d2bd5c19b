"""End-to-end orchestration: mixing, enhancement, oracle SPP grids.

``enhance`` wires the full per-bin streaming machine: STFT analysis, SPP
(model-based or from supplied masks), recursive noisy/noise correlation
tracking, decision-directed a-priori SNR, speech IFC estimation, the
distortionless filter solve, and overlap-add synthesis.  Frequency bins
are independent state machines; frames advance strictly in order.
"""

from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .ifc import mean_noise_ifc_grid
from .spp import MaskGrid, SppModelParams, ideal_masks, spp_from_masks
from .stft import SpectrogramGrid, StftConfig, analyze, synthesize
from .covariance import SmoothingParams

FILTERS = ("mfmvdr", "mfmpdr")
SPP_SOURCES = ("model", "mask_n1", "mask_n2", "oracle")

# keys accepted in the flat key=value config file
CONFIG_KEYS = (
    "alpha_n", "lambda_y", "lambda_dda", "delta", "n_taps",
    "frame_ms", "hop_ms", "xi_h1_db", "prior_ratio",
)


@dataclass
class Utterance:
    samples: np.ndarray
    sample_rate: int = 16000
    id: str = ""

    def __post_init__(self):
        self.samples = np.asarray(self.samples, dtype=np.float64)
        if self.samples.ndim != 1:
            raise ValueError("expected a 1-D sample vector")


@dataclass
class EnhanceConfig:
    filter: str = "mfmvdr"
    spp_source: str = "model"
    n_taps: int = 18
    stft: StftConfig = field(default_factory=StftConfig)
    smoothing: SmoothingParams = field(default_factory=SmoothingParams)
    spp_params: SppModelParams = field(default_factory=SppModelParams)
    lambda_dda: float = 0.97
    xi_floor: float = 10.0 ** -1.5

    def __post_init__(self):
        if self.filter not in FILTERS:
            raise ValueError(f"unknown filter {self.filter!r}")
        if self.spp_source not in SPP_SOURCES:
            raise ValueError(f"unknown SPP source {self.spp_source!r}")
        if self.n_taps < 1:
            raise ValueError("n_taps must be >= 1")
        if not 0.0 < self.lambda_dda < 1.0:
            raise ValueError("lambda_dda must be in (0, 1)")
        if self.xi_floor <= 0.0:
            raise ValueError("xi_floor must be > 0")


def config_from_mapping(values):
    """Build an EnhanceConfig from config-file parameter values."""
    unknown = set(values) - set(CONFIG_KEYS)
    if unknown:
        raise ValueError(f"unknown config keys: {sorted(unknown)}")
    rate = 16000
    frame_ms = float(values.get("frame_ms", 4.0))
    hop_ms = float(values.get("hop_ms", 1.0))
    stft_cfg = StftConfig(
        sample_rate=rate,
        frame_len=int(round(rate * frame_ms / 1000.0)),
        hop=int(round(rate * hop_ms / 1000.0)),
    )
    smoothing = SmoothingParams(
        alpha_n=float(values.get("alpha_n", 0.98)),
        lambda_y=float(values.get("lambda_y", 0.92)),
        delta=float(values.get("delta", 0.04)),
    )
    spp_params = SppModelParams(
        prior_ratio=float(values.get("prior_ratio", 1.0)),
        xi_h1=10.0 ** (float(values.get("xi_h1_db", 15.0)) / 10.0),
    )
    return EnhanceConfig(
        n_taps=int(values.get("n_taps", 18)),
        stft=stft_cfg,
        smoothing=smoothing,
        spp_params=spp_params,
        lambda_dda=float(values.get("lambda_dda", 0.97)),
    )


def parse_config(text):
    """Parse the flat ``key=value`` config format (#-comments allowed)."""
    values = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if "=" not in stripped:
            raise ValueError(f"config line {lineno}: expected key=value")
        key, _, value = stripped.partition("=")
        values[key.strip()] = value.strip()
    return config_from_mapping(values)


def load_config(path):
    with open(path) as fh:
        return parse_config(fh.read())


def mix_at_snr(clean, noise, snr_db, seed):
    """Mix a seeded noise segment into clean speech at an exact broadband SNR.

    Returns ``(noisy, noise_used)`` where ``noise_used`` is the scaled
    noise realization actually added (needed for oracle masks).  Same
    seed, same inputs: bit-identical output.
    """
    if clean.sample_rate != noise.sample_rate:
        raise ValueError("sample-rate mismatch between clean and noise")
    num = clean.samples.size
    if noise.samples.size < num:
        raise ValueError("noise must be at least as long as clean")
    clean_energy = float(np.sum(clean.samples ** 2))
    if clean_energy <= 0.0:
        raise ValueError("silent clean signal")
    rng = np.random.default_rng(seed)
    offset = int(rng.integers(0, noise.samples.size - num + 1))
    segment = noise.samples[offset : offset + num]
    seg_energy = float(np.sum(segment ** 2))
    if seg_energy <= 0.0:
        raise ValueError("silent noise segment")
    scale = np.sqrt(clean_energy / (seg_energy * 10.0 ** (snr_db / 10.0)))
    noise_used = segment * scale
    noisy = clean.samples + noise_used
    mix_id = clean.id or "mix"
    return (
        Utterance(noisy, clean.sample_rate, id=mix_id),
        Utterance(noise_used, clean.sample_rate, id=mix_id + ":noise"),
    )


def oracle_spp(clean, noise_used, variant, cfg=None):
    """Oracle SPP grid from the true components: ideal masks then the
    requested mask-to-SPP mapping (identical for N1/N2 on ideal masks)."""
    if cfg is None:
        cfg = StftConfig()
    if clean.samples.size != noise_used.samples.size:
        raise ValueError("clean/noise length mismatch")
    masks = ideal_masks(analyze(clean.samples, cfg), analyze(noise_used.samples, cfg))
    return spp_from_masks(masks, variant)


def _spp_grid_for(cfg, grid, masks):
    """Resolve the SPP grid a kernel run should use (None = model-based)."""
    if cfg.spp_source == "model":
        return None
    if masks is None:
        raise ValueError(f"SPP source {cfg.spp_source!r} requires a mask grid")
    if masks.shape != grid.data.shape:
        raise ValueError(
            f"mask grid shape {masks.shape} does not match STFT grid {grid.data.shape}"
        )
    if cfg.spp_source == "mask_n1":
        return spp_from_masks(masks, "N1").speech
    if cfg.spp_source == "mask_n2":
        return spp_from_masks(masks, "N2").speech
    # oracle: the caller supplies a ready SPP grid in the speech plane
    return masks.speech


def enhance_grid(grid, cfg, masks=None):
    """Run the enhancement recursion on an analyzed grid.

    Returns ``(xhat, spp_used, stats)``; ``stats`` reports the
    passthrough-fallback count and the worst distortionless-constraint
    deviation across all computed filters.
    """
    y = np.ascontiguousarray(grid.data, dtype=np.complex128)
    num_bins, num_frames = y.shape
    spp_grid = _spp_grid_for(cfg, grid, masks)
    use_model = spp_grid is None
    if use_model:
        spp_grid = np.zeros((num_bins, num_frames))
    mu = mean_noise_ifc_grid(cfg.stft, cfg.n_taps)
    power = np.abs(y) ** 2
    head = power[:, : min(cfg.n_taps, num_frames)]
    init_psd = head.mean(axis=1)
    global_mean = float(power.mean()) if power.size else 0.0
    psd_floor = 1e-12 * global_mean if global_mean > 0.0 else 1e-30
    xhat, spp_used, fallbacks, max_resid = _kernels.enhance_bins(
        y,
        np.ascontiguousarray(mu),
        init_psd,
        np.ascontiguousarray(spp_grid, dtype=np.float64),
        use_model,
        cfg.filter == "mfmpdr",
        cfg.smoothing.alpha_n,
        cfg.smoothing.lambda_y,
        cfg.smoothing.delta,
        cfg.lambda_dda,
        cfg.xi_floor,
        cfg.spp_params.prior_ratio,
        cfg.spp_params.xi_h1,
        psd_floor,
    )
    stats = {"fallbacks": int(fallbacks), "max_constraint_dev": float(max_resid)}
    return xhat, spp_used, stats


def enhance(noisy, cfg=None, masks=None, return_stats=False):
    """Enhance an utterance; output has the input's length and rate.

    ``masks`` must be given iff ``cfg.spp_source`` needs them (mask
    variants expect speech/noise mask planes, ``oracle`` expects an SPP
    grid in the speech plane).
    """
    if cfg is None:
        cfg = EnhanceConfig()
    if noisy.sample_rate != cfg.stft.sample_rate:
        raise ValueError(
            f"utterance rate {noisy.sample_rate} does not match config rate {cfg.stft.sample_rate}"
        )
    grid = analyze(noisy.samples, cfg.stft)
    xhat, _, stats = enhance_grid(grid, cfg, masks)
    out = synthesize(SpectrogramGrid(xhat, cfg.stft))
    if out.size < noisy.samples.size:
        out = np.concatenate([out, np.zeros(noisy.samples.size - out.size)])
    else:
        out = out[: noisy.samples.size]
    result = Utterance(out, noisy.sample_rate, id=noisy.id)
    if return_stats:
        return result, stats
    return result

"""Objective evaluation against a clean reference.

Frequency-weighted segmental SNR over mel-spaced bands plus plain
time-domain segmental SNR, both frame-clipped to a fixed dB range and
averaged over frames with active clean speech.  The first second is
excluded by default, matching an evaluation protocol that prepends pure
noise for estimator warm-up.
"""

import json
from dataclasses import dataclass

import numpy as np

from .stft import periodic_hann

REPORT_FIELDS = ("id", "snr", "method", "fwssnr_in", "fwssnr_out", "segsnr_in", "segsnr_out")


@dataclass
class MetricConfig:
    eval_frame_ms: float = 25.0
    eval_hop_ms: float = 10.0
    num_bands: int = 25
    weight_exponent: float = 0.2
    clip_lo: float = -10.0
    clip_hi: float = 35.0
    exclude_head_s: float = 1.0

    def __post_init__(self):
        if self.clip_lo >= self.clip_hi:
            raise ValueError("clip_lo must be below clip_hi")
        if self.num_bands < 1:
            raise ValueError("need at least one band")


def _hz_to_mel(f):
    return 2595.0 * np.log10(1.0 + np.asarray(f, dtype=np.float64) / 700.0)


def _mel_to_hz(m):
    return 700.0 * (10.0 ** (np.asarray(m, dtype=np.float64) / 2595.0) - 1.0)


def mel_filterbank(num_bands, nfft, sample_rate):
    """Triangular mel-spaced filters over the one-sided FFT bins."""
    edges_mel = np.linspace(0.0, _hz_to_mel(sample_rate / 2.0), num_bands + 2)
    edges_hz = _mel_to_hz(edges_mel)
    freqs = np.arange(nfft // 2 + 1) * sample_rate / nfft
    fb = np.zeros((num_bands, freqs.size))
    for j in range(num_bands):
        lo, mid, hi = edges_hz[j], edges_hz[j + 1], edges_hz[j + 2]
        rising = (freqs - lo) / (mid - lo)
        falling = (hi - freqs) / (hi - mid)
        fb[j] = np.maximum(0.0, np.minimum(rising, falling))
    return fb


def _frame_signal(x, frame_len, hop):
    if x.size < frame_len:
        return np.empty((0, frame_len))
    num = (x.size - frame_len) // hop + 1
    return np.lib.stride_tricks.sliding_window_view(x, frame_len)[::hop][:num]


def _check_pair(clean, enhanced, cfg, sample_rate):
    clean = np.asarray(clean, dtype=np.float64)
    enhanced = np.asarray(enhanced, dtype=np.float64)
    if clean.shape != enhanced.shape or clean.ndim != 1:
        raise ValueError("signals must be 1-D and aligned to equal lengths")
    head = int(round(cfg.exclude_head_s * sample_rate))
    return clean[head:], enhanced[head:]


def _weighted_mean(values, weights):
    # centered so a constant input (e.g. all bands clipped) is returned exactly
    base = values.mean()
    return base + np.dot(weights, values - base) / np.sum(weights)


def fwssnr(clean, enhanced, cfg=None, sample_rate=16000):
    """Frequency-weighted segmental SNR in dB.

    Per frame and mel band: ``10*log10(B_x / (sqrt(B_x) - sqrt(B_e))^2)``
    clipped to ``[clip_lo, clip_hi]``, weighted by ``B_x**weight_exponent``
    and averaged over bands, then over frames.  Frames without clean
    energy are skipped.
    """
    if cfg is None:
        cfg = MetricConfig()
    clean, enhanced = _check_pair(clean, enhanced, cfg, sample_rate)
    frame_len = int(round(cfg.eval_frame_ms * sample_rate / 1000.0))
    hop = int(round(cfg.eval_hop_ms * sample_rate / 1000.0))
    nfft = 1 << (frame_len - 1).bit_length()
    window = periodic_hann(frame_len)
    fb = mel_filterbank(cfg.num_bands, nfft, sample_rate)

    frames_x = _frame_signal(clean, frame_len, hop)
    frames_e = _frame_signal(enhanced, frame_len, hop)
    scores = []
    for fx, fe in zip(frames_x, frames_e):
        bx = fb @ (np.abs(np.fft.rfft(fx * window, nfft)) ** 2)
        be = fb @ (np.abs(np.fft.rfft(fe * window, nfft)) ** 2)
        active = bx > 0.0
        if not np.any(active):
            continue
        bx = bx[active]
        be = be[active]
        err = (np.sqrt(bx) - np.sqrt(be)) ** 2
        with np.errstate(divide="ignore"):
            snr = 10.0 * np.log10(bx / np.where(err > 0.0, err, np.inf))
            snr[err == 0.0] = np.inf
        snr = np.clip(snr, cfg.clip_lo, cfg.clip_hi)
        weights = bx ** cfg.weight_exponent
        scores.append(_weighted_mean(snr, weights))
    if not scores:
        raise ValueError("silent reference")
    return float(np.mean(scores))


def segsnr(clean, enhanced, cfg=None, sample_rate=16000):
    """Plain segmental SNR in dB: per-frame clean-to-error energy ratio,
    clipped and averaged over frames with active clean speech."""
    if cfg is None:
        cfg = MetricConfig()
    clean, enhanced = _check_pair(clean, enhanced, cfg, sample_rate)
    frame_len = int(round(cfg.eval_frame_ms * sample_rate / 1000.0))
    hop = int(round(cfg.eval_hop_ms * sample_rate / 1000.0))
    frames_x = _frame_signal(clean, frame_len, hop)
    frames_e = _frame_signal(enhanced, frame_len, hop)
    ex = np.sum(frames_x * frames_x, axis=1)
    err = np.sum((frames_x - frames_e) ** 2, axis=1)
    active = ex > 0.0
    if not np.any(active):
        raise ValueError("silent reference")
    ex = ex[active]
    err = err[active]
    with np.errstate(divide="ignore"):
        snr = 10.0 * np.log10(ex / np.where(err > 0.0, err, np.inf))
        snr[err == 0.0] = np.inf
    return float(np.mean(np.clip(snr, cfg.clip_lo, cfg.clip_hi)))


def format_table(rows):
    """Tab-separated table of report rows (header + one line per row)."""
    lines = ["\t".join(REPORT_FIELDS)]
    for row in rows:
        lines.append("\t".join("" if row.get(f) is None else str(row.get(f)) for f in REPORT_FIELDS))
    return "\n".join(lines) + "\n"


def write_report(path, rows):
    """JSON report: a list of objects with exactly the documented fields."""
    payload = [{f: row.get(f) for f in REPORT_FIELDS} for row in rows]
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2)
        fh.write("\n")

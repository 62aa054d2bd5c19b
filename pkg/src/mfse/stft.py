"""STFT analysis and weighted overlap-add synthesis.

Conventions used throughout the package:

* un-normalized forward DFT, ``1/frame_len`` on the inverse
  (``numpy.fft.rfft`` / ``irfft`` defaults),
* one-sided spectra with ``frame_len // 2 + 1`` bins,
* periodic (DFT-even) Hann analysis and synthesis windows, which give an
  exactly constant squared-window overlap sum of 3/2 at 75% overlap.
"""

from dataclasses import dataclass, field

import numpy as np


def periodic_hann(length):
    """Periodic (DFT-even) Hann window of the given length."""
    return 0.5 * (1.0 - np.cos(2.0 * np.pi * np.arange(length) / length))


@dataclass
class StftConfig:
    """Analysis/synthesis parameters.

    Defaults give 4 ms frames with a 1 ms shift at 16 kHz (64/16 samples),
    i.e. 33 one-sided bins and 75% overlap.
    """

    sample_rate: int = 16000
    frame_len: int = 64
    hop: int = 16
    window: np.ndarray = None

    def __post_init__(self):
        if self.frame_len <= 0 or self.hop <= 0:
            raise ValueError("frame_len and hop must be positive")
        if self.frame_len % self.hop != 0:
            raise ValueError("frame_len must be a multiple of hop")
        if self.window is None:
            self.window = periodic_hann(self.frame_len)
        self.window = np.asarray(self.window, dtype=np.float64)
        if self.window.shape != (self.frame_len,):
            raise ValueError("window length must equal frame_len")
        if np.any(self.window < 0):
            raise ValueError("window values must be non-negative")

    @property
    def num_bins(self):
        return self.frame_len // 2 + 1

    def num_frames(self, num_samples):
        """Number of full frames covering ``num_samples`` samples."""
        if num_samples < self.frame_len:
            return 0
        return (num_samples - self.frame_len) // self.hop + 1

    def overlap_add_constant(self):
        """Squared-window overlap sum, required constant for reconstruction.

        Raises if the window/hop pair does not overlap-add to a constant
        (checked on the hop-periodic interior pattern).
        """
        wsq = (self.window * self.window).reshape(-1, self.hop)
        col = wsq.sum(axis=0)
        c = float(col.mean())
        if c <= 0 or np.max(np.abs(col - c)) > 1e-8 * max(c, 1.0):
            raise ValueError("window/hop violates reconstruction")
        return c


@dataclass
class SpectrogramGrid:
    """One-sided STFT coefficients, indexed ``data[bin, frame]``."""

    data: np.ndarray
    config: StftConfig

    @property
    def num_bins(self):
        return self.data.shape[0]

    @property
    def num_frames(self):
        return self.data.shape[1]


def analyze(signal, cfg=None):
    """STFT of a real signal.

    Frame ``l`` covers samples ``[l*hop, l*hop + frame_len)``; each frame is
    windowed and transformed, keeping the one-sided spectrum.  No padding is
    applied; trailing samples that do not fill a frame are dropped.
    """
    if cfg is None:
        cfg = StftConfig()
    x = np.asarray(signal, dtype=np.float64)
    if x.ndim != 1:
        raise ValueError("expected a 1-D sample vector")
    if x.size < cfg.frame_len:
        raise ValueError("input too short")
    num_frames = cfg.num_frames(x.size)
    frames = np.lib.stride_tricks.sliding_window_view(x, cfg.frame_len)
    frames = frames[:: cfg.hop][:num_frames]
    spec = np.fft.rfft(frames * cfg.window, axis=1)
    return SpectrogramGrid(np.ascontiguousarray(spec.T), cfg)


def synthesize(grid):
    """Weighted overlap-add inverse of :func:`analyze`.

    Each frame is inverse-transformed, multiplied by the synthesis window
    (same as analysis) and overlap-added; the result is divided by the
    constant squared-window overlap sum.  Reconstruction is exact on
    interior samples; the first and last ``frame_len - hop`` samples keep
    the window taper.
    """
    cfg = grid.config
    if grid.data.ndim != 2 or grid.num_bins != cfg.num_bins:
        raise ValueError("grid bin count does not match its config")
    norm = cfg.overlap_add_constant()
    num_frames = grid.num_frames
    frames = np.fft.irfft(grid.data.T, n=cfg.frame_len, axis=1)
    frames *= cfg.window / norm
    ratio = cfg.frame_len // cfg.hop
    # overlap-add via the hop-block layout: frame l spans blocks l..l+ratio-1
    acc = np.zeros((num_frames + ratio - 1, cfg.hop))
    blocks = frames.reshape(num_frames, ratio, cfg.hop)
    for j in range(ratio):
        acc[j : j + num_frames] += blocks[:, j, :]
    return acc.reshape(-1)

"""16-bit PCM mono WAV read/write."""

import numpy as np
from scipy.io import wavfile


def read_wav(path, expect_rate=None):
    """Read a mono 16-bit PCM WAV file as float64 samples in [-1, 1)."""
    rate, data = wavfile.read(path)
    if data.ndim != 1:
        raise ValueError("expected mono audio")
    if data.dtype != np.int16:
        raise ValueError("expected 16-bit PCM samples")
    if expect_rate is not None and rate != expect_rate:
        raise ValueError(f"expected {expect_rate} Hz audio, file is {rate} Hz")
    return data.astype(np.float64) / 32768.0, int(rate)


def write_wav(path, samples, rate):
    """Write float samples as a mono 16-bit PCM WAV file (saturating)."""
    x = np.clip(np.asarray(samples, dtype=np.float64), -1.0, 32767.0 / 32768.0)
    wavfile.write(path, rate, np.round(x * 32768.0).astype(np.int16))

"""Shared helpers: synthetic speech-like material and random Hermitian matrices."""

import numpy as np
import pytest

SAMPLE_RATE = 16000


def syllable_envelope(num_samples, seed, rate=4.0, floor=0.02):
    """Raised-cosine syllables with seeded per-syllable stress levels."""
    rng = np.random.default_rng(seed + 1000)
    period = int(SAMPLE_RATE / rate)
    env = np.full(num_samples, floor)
    pos = 0
    while pos < num_samples:
        level = rng.uniform(0.4, 1.0)
        dur = int(period * rng.uniform(0.5, 0.9))
        seg = min(dur, num_samples - pos)
        ramp = 0.5 - 0.5 * np.cos(2 * np.pi * np.arange(seg) / max(dur, 1))
        env[pos : pos + seg] = np.maximum(env[pos : pos + seg], level * ramp)
        pos += period
    return env


def speech_like(seconds=2.0, seed=0, drift_hz=15.0, strong_gain=5.0, modulated=True):
    """Harmonic speech proxy: partials on a 500 Hz grid (at most one per
    analysis bin), a few strong low partials over many weaker ones, a
    slow random pitch drift per partial and a syllabic stress envelope.
    """
    rng = np.random.default_rng(seed)
    n = int(seconds * SAMPLE_RATE)
    t = np.arange(n) / SAMPLE_RATE
    x = np.zeros(n)
    for f in np.arange(500.0, 7400.0, 500.0):
        gain = strong_gain if f <= 1500 else 1.0
        if drift_hz > 0:
            steps = rng.standard_normal(n) * drift_hz / np.sqrt(SAMPLE_RATE)
            phase = 2 * np.pi * f * t + rng.uniform(0, 2 * np.pi) + 2 * np.pi * np.cumsum(steps)
        else:
            phase = 2 * np.pi * f * t + rng.uniform(0, 2 * np.pi)
        x += gain * np.sin(phase)
    if modulated:
        x = x * syllable_envelope(n, seed)
    return x / np.max(np.abs(x))


def utterance_with_head(speech, head_seconds=1.0):
    """Prepend silence so metrics can exclude the warm-up region."""
    return np.concatenate([np.zeros(int(head_seconds * SAMPLE_RATE)), speech])


def random_hermitian_psd(rng, n, load=0.1):
    """Well-conditioned random Hermitian positive-definite matrix."""
    a = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    m = a @ a.conj().T / n
    # gemm output is not bit-symmetric; fold it so tests can assert
    # exact Hermitian preservation
    m = 0.5 * (m + m.conj().T)
    return m + load * np.eye(n)


def random_steering(rng, n):
    """Random unit-first-element complex vector (valid IFC shape)."""
    g = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    g[0] = 1.0
    return g


@pytest.fixture
def rng():
    return np.random.default_rng(12345)

import numpy as np
import pytest

from conftest import random_hermitian_psd
from mfse.ifc import (
    AprioriSnrState,
    mean_noise_ifc,
    mean_noise_ifc_grid,
    noisy_ifc,
    speech_ifc,
    update_apriori_snr,
    window_overlap_correlation,
)
from mfse.stft import StftConfig, analyze, periodic_hann


def test_window_overlap_correlation_frozen_values():
    cfg = StftConfig()
    rho = np.array([window_overlap_correlation(cfg.window, lag * 16) for lag in range(6)])
    # independent evaluation: normalized autocorrelation of the periodic
    # Hann window at hop multiples
    w = periodic_hann(64)
    ref = []
    for lag in range(6):
        s = lag * 16
        if s >= 64:
            ref.append(0.0)
        else:
            ref.append(np.sum(w[: 64 - s] * w[s:]) / np.sum(w * w))
    assert np.allclose(rho, ref, atol=1e-15)
    assert rho[0] == 1.0
    assert abs(rho[1] - 0.6591550253248205) < 1e-15
    assert abs(rho[2] - 1.0 / 6.0) < 1e-15
    assert abs(rho[3] - 0.007511641341846277) < 1e-15
    assert rho[4] == 0.0 and rho[5] == 0.0


def test_mean_noise_ifc_structure():
    cfg = StftConfig()
    for k in (0, 3, 16, 32):
        mu = mean_noise_ifc(cfg, k, 18)
        assert mu.shape == (18,)
        assert mu[0] == 1.0
        # lag phase: negative rotation at the bin frequency times the hop
        rho = np.array([window_overlap_correlation(cfg.window, n * 16) for n in range(18)])
        ref = rho * np.exp(-2j * np.pi * k * np.arange(18) * 16 / 64)
        assert np.allclose(mu, ref, atol=1e-15)
        assert np.allclose(mu[4:], 0.0, atol=0)


def test_mean_noise_ifc_grid_stacks_bins():
    cfg = StftConfig()
    grid = mean_noise_ifc_grid(cfg, 7)
    assert grid.shape == (33, 7)
    for k in (0, 8, 32):
        assert np.array_equal(grid[k], mean_noise_ifc(cfg, k, 7))


def test_mean_noise_ifc_matches_white_noise_coherence():
    # small Monte-Carlo sanity run; the acceptance suite runs the big one
    cfg = StftConfig()
    rng = np.random.default_rng(11)
    x = rng.standard_normal(16 * 20000 + 64)
    g = analyze(x, cfg).data
    taps = 5
    mu = mean_noise_ifc_grid(cfg, taps)
    denom = np.mean(np.abs(g) ** 2, axis=1)
    frames = g.shape[1]
    for n in range(taps):
        emp = np.mean(g[:, : frames - n] * np.conj(g[:, n:]), axis=1) / denom
        assert np.max(np.abs(mu[:, n] - emp)) < 0.05


def test_noisy_ifc_normalizes_first_column(rng):
    phi = random_hermitian_psd(rng, 6)
    gamma = noisy_ifc(phi)
    assert gamma[0] == 1.0
    ref = phi[:, 0] / phi[0, 0].real
    assert np.allclose(gamma, ref, atol=1e-12)


def test_noisy_ifc_rejects_zero_psd():
    with pytest.raises(ValueError):
        noisy_ifc(np.zeros((4, 4), dtype=complex))


def test_speech_ifc_limits(rng):
    cfg = StftConfig()
    mu = mean_noise_ifc(cfg, 5, 6)
    gamma_y = noisy_ifc(random_hermitian_psd(rng, 6))
    # large a-priori SNR: the noisy IFC is already the speech IFC
    hi = speech_ifc(gamma_y, mu, 1e12)
    assert np.allclose(hi, gamma_y, atol=1e-10)
    # the exact combination formula
    xi = 2.5
    ref = (1 + xi) / xi * gamma_y - mu / xi
    assert np.allclose(speech_ifc(gamma_y, mu, xi), ref, atol=1e-12)


def test_speech_ifc_first_element_exactly_one(rng):
    cfg = StftConfig()
    mu = mean_noise_ifc(cfg, 7, 10)
    for _ in range(25):
        gamma_y = noisy_ifc(random_hermitian_psd(rng, 10))
        out = speech_ifc(gamma_y, mu, float(rng.uniform(0.04, 50.0)))
        assert out[0] == 1.0 + 0.0j


def test_apriori_snr_formula_and_floor():
    state = AprioriSnrState(prev_speech_power=4.0)
    xi = update_apriori_snr(state, noisy_power=9.0, noise_psd=2.0, noise_psd_prev=1.5)
    ref = 0.97 * (4.0 / 1.5) + 0.03 * max(9.0 / 2.0 - 1.0, 0.0)
    assert abs(xi - ref) < 1e-14
    # noise-only frame with no speech history hits the floor
    silent = AprioriSnrState(prev_speech_power=0.0)
    assert update_apriori_snr(silent, 0.5, 1.0, 1.0) == 10.0 ** -1.5


def test_apriori_snr_vectorized(rng):
    state = AprioriSnrState(prev_speech_power=rng.uniform(0, 3, size=33))
    power = rng.uniform(0, 5, size=33)
    psd = rng.uniform(0.5, 2.0, size=33)
    out = update_apriori_snr(state, power, psd, psd)
    ref = np.maximum(
        0.97 * state.prev_speech_power / psd + 0.03 * np.maximum(power / psd - 1, 0),
        10.0 ** -1.5,
    )
    assert np.allclose(out, ref, atol=1e-14)


def test_state_validation():
    with pytest.raises(ValueError):
        AprioriSnrState(lambda_dda=1.0)
    with pytest.raises(ValueError):
        AprioriSnrState(xi_floor=0.0)

import numpy as np
import pytest

from mfse.spp import (
    MaskGrid,
    SppModelParams,
    ideal_masks,
    spp_from_masks,
    spp_model,
)
from mfse.stft import SpectrogramGrid, StftConfig


def model_reference(noisy_power, noise_psd, prior_ratio=1.0, xi_h1=10.0 ** 1.5):
    """Independent scalar evaluation of the speech-presence posterior."""
    glr = prior_ratio * (1.0 + xi_h1) * np.exp(-(noisy_power / noise_psd) * xi_h1 / (1.0 + xi_h1))
    return 1.0 / (1.0 + glr)


def test_zero_power_closed_form():
    # at zero observed power the posterior collapses to 1/(2 + xi_h1)
    val = spp_model(0.0, 1.0, SppModelParams())
    assert abs(val - 1.0 / (2.0 + 10.0 ** 1.5)) < 1e-12


def test_power_equal_to_noise_psd_value():
    val = spp_model(3.7, 3.7, SppModelParams())
    assert abs(val - 0.07476733504582163) < 1e-12
    assert abs(val - model_reference(1.0, 1.0)) < 1e-15


def test_model_matches_reference_on_random_points(rng):
    p = SppModelParams()
    power = rng.uniform(0.0, 50.0, size=200)
    psd = rng.uniform(0.1, 5.0, size=200)
    got = spp_model(power, psd, p)
    ref = model_reference(power, psd)
    assert np.allclose(got, ref, rtol=0, atol=1e-14)


def test_model_monotonic_in_snr(rng):
    p = SppModelParams()
    ratios = np.sort(rng.uniform(0.0, 40.0, size=10_000))
    vals = spp_model(ratios, np.ones_like(ratios), p)
    assert np.all(np.diff(vals) >= 0)
    assert np.all((vals > 0) & (vals < 1))


def test_model_saturates():
    p = SppModelParams()
    assert spp_model(1e4, 1.0, p) > 1 - 1e-12
    assert spp_model(0.0, 1.0, p) < 0.05


def test_model_rejects_bad_noise_psd():
    with pytest.raises(ValueError):
        spp_model(1.0, 0.0, SppModelParams())
    with pytest.raises(ValueError):
        spp_model(1.0, -2.0, SppModelParams())


def test_params_validation():
    with pytest.raises(ValueError):
        SppModelParams(prior_ratio=-1.0)
    with pytest.raises(ValueError):
        SppModelParams(xi_h1=0.0)


def _grids(rng, k=33, l=40):
    cfg = StftConfig()
    x = rng.standard_normal((k, l)) + 1j * rng.standard_normal((k, l))
    n = rng.standard_normal((k, l)) + 1j * rng.standard_normal((k, l))
    return SpectrogramGrid(x, cfg), SpectrogramGrid(n, cfg)


def test_ideal_masks_unit_identity(rng):
    xg, ng = _grids(rng)
    masks = ideal_masks(xg, ng)
    assert np.allclose(masks.speech ** 2 + masks.noise ** 2, 1.0, atol=1e-12)
    assert masks.speech.min() >= 0 and masks.speech.max() <= 1


def test_ideal_masks_zero_energy_convention():
    cfg = StftConfig()
    zero = SpectrogramGrid(np.zeros((33, 5), dtype=complex), cfg)
    masks = ideal_masks(zero, zero)
    assert np.allclose(masks.speech, np.sqrt(0.5), atol=0)
    assert np.allclose(masks.noise, np.sqrt(0.5), atol=0)


def test_ideal_masks_known_ratio():
    cfg = StftConfig()
    x = SpectrogramGrid(np.full((33, 2), 3.0 + 0j), cfg)
    n = SpectrogramGrid(np.full((33, 2), 4.0 + 0j), cfg)
    masks = ideal_masks(x, n)
    assert np.allclose(masks.speech, 0.6, atol=1e-15)
    assert np.allclose(masks.noise, 0.8, atol=1e-15)


def test_spp_variants(rng):
    speech = rng.uniform(0, 1, size=(33, 20))
    noise = rng.uniform(0, 1, size=(33, 20))
    masks = MaskGrid(speech, noise)
    n1 = spp_from_masks(masks, "N1")
    assert np.array_equal(n1.speech, speech)
    n2 = spp_from_masks(masks, "N2")
    ref = speech / np.sqrt(speech ** 2 + noise ** 2)
    assert np.allclose(n2.speech, ref, atol=1e-14)
    assert np.allclose(n2.noise, 1.0 - n2.speech, atol=1e-14)


def test_spp_n2_zero_masks_convention():
    masks = MaskGrid(np.zeros((2, 2)), np.zeros((2, 2)))
    n2 = spp_from_masks(masks, "N2")
    assert np.array_equal(n2.speech, np.zeros((2, 2)))


def test_spp_variants_agree_on_ideal_masks(rng):
    xg, ng = _grids(rng)
    masks = ideal_masks(xg, ng)
    n1 = spp_from_masks(masks, "N1")
    n2 = spp_from_masks(masks, "N2")
    assert np.allclose(n1.speech, n2.speech, atol=1e-12)


def test_spp_from_masks_rejects_unknown_variant(rng):
    masks = MaskGrid(np.zeros((2, 2)), np.zeros((2, 2)))
    with pytest.raises(ValueError):
        spp_from_masks(masks, "N3")


def test_mask_grid_validation():
    with pytest.raises(ValueError):
        MaskGrid(np.full((2, 2), 1.5), np.zeros((2, 2)))
    with pytest.raises(ValueError):
        MaskGrid(np.full((2, 2), np.nan), np.zeros((2, 2)))
    with pytest.raises(ValueError):
        MaskGrid(np.zeros((2, 2)), np.zeros((3, 2)))

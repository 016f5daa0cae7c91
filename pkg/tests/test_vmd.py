from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from modecast.errors import TooShort
from modecast.series import TimeSeries
from modecast.vmd import (
    ModeSet,
    VmdConfig,
    crop_center,
    dft,
    idft,
    mirror_extend,
    reconstruct,
    vmd_decompose,
)


def _corr(a, b):
    a = a - a.mean()
    b = b - b.mean()
    return float(a @ b / (np.linalg.norm(a) * np.linalg.norm(b)))


# ---------------------------------------------------------------------------
# Transforms
# ---------------------------------------------------------------------------

def test_dft_impulse():
    assert np.allclose(dft([1, 0, 0, 0]), np.ones(4))


def test_dft_constant_is_dc_bin():
    out = dft(np.full(6, 2.5))
    assert out[0] == pytest.approx(15.0)
    assert np.abs(out[1:]).max() < 1e-12


def test_dft_round_trip_length_13():
    rng = np.random.default_rng(7)
    x = rng.standard_normal(13) + 1j * rng.standard_normal(13)
    back = idft(dft(x))
    assert np.abs(back - x).max() <= 1e-10 * np.abs(x).max()


@pytest.mark.parametrize("n", [1, 2, 3, 8, 12, 100, 255, 636])
def test_dft_matches_numpy_oracle(n):
    rng = np.random.default_rng(n)
    x = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    ours = dft(x)
    ref = np.fft.fft(x)
    assert np.abs(ours - ref).max() <= 1e-10 * max(1.0, np.abs(ref).max())


def test_dft_empty_rejected():
    with pytest.raises(TooShort):
        dft([])


def test_mirror_extend_hand_case():
    assert np.array_equal(mirror_extend([1, 2, 3, 4]), [2, 1, 1, 2, 3, 4, 4, 3])


def test_mirror_extend_too_short():
    with pytest.raises(TooShort):
        mirror_extend([1.0])


@given(st.lists(st.floats(-1e6, 1e6), min_size=2, max_size=64))
def test_crop_center_inverts_mirror_extend(values):
    x = np.array(values)
    assert np.array_equal(crop_center(mirror_extend(x)), x)


# ---------------------------------------------------------------------------
# Decomposition
# ---------------------------------------------------------------------------

def test_single_tone_recovery():
    t = np.arange(512)
    x = np.cos(2 * np.pi * 0.10 * t)
    ms = vmd_decompose(x, VmdConfig(n_modes=1, alpha=2000.0))
    assert abs(ms.omegas[0] - 0.10) <= 2.0 / 512
    assert _corr(ms.modes[0], x) > 0.99


def test_two_tone_recovery():
    t = np.arange(1024)
    tone1 = np.cos(2 * np.pi * 0.05 * t)
    tone2 = np.cos(2 * np.pi * 0.25 * t + 0.7)
    ms = vmd_decompose(tone1 + tone2, VmdConfig(n_modes=2, alpha=2000.0))
    assert abs(ms.omegas[0] - 0.05) <= 2.0 / 1024
    assert abs(ms.omegas[1] - 0.25) <= 2.0 / 1024
    assert _corr(ms.modes[0], tone1) > 0.99
    assert _corr(ms.modes[1], tone2) > 0.99


def test_constant_signal_dc_mode():
    x = np.full(64, 3.7)
    ms = vmd_decompose(x, VmdConfig(n_modes=1, dc_mode=True))
    assert ms.omegas[0] == 0.0
    assert np.abs(ms.modes[0] - 3.7).max() < 1e-6 * 3.7


def test_too_short_for_mode_count():
    with pytest.raises(TooShort):
        vmd_decompose(np.arange(5.0), VmdConfig(n_modes=3))


def test_no_convergence_is_not_an_error():
    rng = np.random.default_rng(0)
    ms = vmd_decompose(rng.standard_normal(128), VmdConfig(n_modes=2, max_iter=2))
    assert ms.iterations == 2
    assert np.isfinite(ms.final_delta)


def test_omegas_sorted_and_in_range():
    rng = np.random.default_rng(3)
    ms = vmd_decompose(rng.standard_normal(200), VmdConfig(n_modes=4))
    assert np.all(np.diff(ms.omegas) >= 0)
    assert np.all(ms.omegas >= 0.0) and np.all(ms.omegas <= 0.5)


def test_reconstruction_accounting_seeded_signals():
    # modes + residual reproduce the input to 1e-10 * max|input|
    for seed in range(20):
        rng = np.random.default_rng(seed)
        x = rng.standard_normal(101 + seed)
        ms = vmd_decompose(x, VmdConfig(n_modes=3))
        gap = np.abs(x - ms.modes.sum(axis=0) - ms.residual).max()
        assert gap <= 1e-10 * np.abs(x).max()


def test_final_delta_below_tol_when_converged():
    t = np.arange(256)
    cfg = VmdConfig(n_modes=1, alpha=2000.0, tol=1e-7, max_iter=500)
    ms = vmd_decompose(np.cos(2 * np.pi * 0.1 * t), cfg)
    assert ms.iterations < cfg.max_iter
    assert ms.final_delta <= cfg.tol


def test_bit_deterministic_across_runs():
    rng = np.random.default_rng(5)
    x = rng.standard_normal(300)
    cfg = VmdConfig(n_modes=3, init_omega="random", seed=11)
    a = vmd_decompose(x, cfg)
    b = vmd_decompose(x, cfg)
    assert np.array_equal(a.modes, b.modes)
    assert np.array_equal(a.omegas, b.omegas)
    assert a.iterations == b.iterations


def test_wiener_shrinkage_energy_concentration():
    # tau=0, large alpha: >= 90% of each mode's spectral energy within 0.05 of omega_k
    t = np.arange(1024)
    x = np.cos(2 * np.pi * 0.05 * t) + np.cos(2 * np.pi * 0.25 * t)
    ms = vmd_decompose(x, VmdConfig(n_modes=2, alpha=2000.0, tau=0.0))
    freqs = np.abs(np.fft.fftfreq(1024))
    for k in range(2):
        spectrum = np.abs(np.fft.fft(ms.modes[k])) ** 2
        in_band = spectrum[np.abs(freqs - ms.omegas[k]) <= 0.05].sum()
        assert in_band >= 0.90 * spectrum.sum()


def test_variance_partition_on_index_like_signal():
    from modecast.synthetic import cpi_like

    series = cpi_like()
    ms = vmd_decompose(series, VmdConfig(n_modes=6))
    var_sum = sum(float(np.var(m)) for m in ms.modes)
    assert var_sum <= 1.05 * float(np.var(series.values))


def test_imaginary_leakage_small():
    rng = np.random.default_rng(9)
    x = rng.standard_normal(257)  # odd length exercises the Bluestein path
    ms = vmd_decompose(x, VmdConfig(n_modes=2))
    assert np.all(np.isreal(ms.modes))


def test_unmirrored_odd_length_signal():
    # odd transform length has no Nyquist bin; the conjugate fill must still
    # produce real modes and exact accounting
    rng = np.random.default_rng(2)
    x = rng.standard_normal(201)
    ms = vmd_decompose(x, VmdConfig(n_modes=2, mirror=False))
    gap = np.abs(x - ms.modes.sum(axis=0) - ms.residual).max()
    assert gap <= 1e-10 * np.abs(x).max()
    t = np.arange(501)
    ms2 = vmd_decompose(np.cos(2 * np.pi * 0.2 * t), VmdConfig(n_modes=1, mirror=False))
    assert abs(ms2.omegas[0] - 0.2) <= 2.0 / 501


def test_reconstruct_sums_modes():
    ms = ModeSet(modes=np.array([[1.0, 1.0], [2.0, 3.0]]), omegas=np.array([0.1, 0.2]),
                 residual=np.zeros(2), iterations=1, final_delta=0.0)
    assert np.array_equal(reconstruct(ms).values, [3.0, 4.0])


def test_reconstruct_single_mode_identity():
    ms = ModeSet(modes=np.array([[1.5, -2.0, 0.25]]), omegas=np.array([0.1]),
                 residual=np.zeros(3), iterations=1, final_delta=0.0)
    assert np.array_equal(reconstruct(ms).values, [1.5, -2.0, 0.25])


def test_reconstruct_plus_residual_reproduces_input():
    rng = np.random.default_rng(21)
    x = rng.standard_normal(180)
    ms = vmd_decompose(TimeSeries(x), VmdConfig(n_modes=2))
    rebuilt = reconstruct(ms).values + ms.residual
    assert np.abs(rebuilt - x).max() <= 1e-10 * np.abs(x).max()

import math

import numpy as np
import pytest

from fcgs.cwt_engine import (MorletParams, ScaleGrid, coi_margin, cwt,
                             cwt_direct, daughter, mother_tabulation, morlet,
                             read_scalogram_csv, scale_to_frequency,
                             scalogram_from_csv, scalogram_to_csv,
                             write_scalogram_csv)
from fcgs.errors import EmptySignal, InvalidScale


def test_params_defaults():
    params = MorletParams()
    assert params.omega0 == 5.4285
    assert params.support_len == 601
    assert params.f0 == pytest.approx(0.86397, abs=1e-5)


def test_params_admissibility_guard():
    with pytest.raises(ValueError):
        MorletParams(omega0=5.0)
    with pytest.raises(ValueError):
        MorletParams(omega0=2.0)


def test_params_canonicalize_even_support():
    assert MorletParams(support_len=600).support_len == 601


def test_morlet_at_zero():
    value = morlet(0.0)
    assert value.imag == 0.0
    assert value.real == pytest.approx(0.75113, abs=1e-5)


def test_morlet_decays():
    assert abs(morlet(12.0)) < 1e-25
    assert abs(morlet(-12.0)) < 1e-25


def test_mother_tabulation_zero_mean():
    samples = mother_tabulation()
    assert samples.size == 601
    assert abs(samples.sum()) < 1e-6
    assert abs(samples.mean()) < 1e-6


def test_daughter_identity_scale():
    params = MorletParams()
    d = daughter(params, 1.0)
    assert d.size == 601
    mid = (d.size - 1) // 2
    assert d[mid] == morlet(0.0, params)


def test_daughter_support_grows_with_scale():
    params = MorletParams()
    assert daughter(params, 2.0).size == 1203   # ceil(2 * 601) rounded up to odd


def test_daughter_norm_preserved():
    params = MorletParams()
    n1 = np.linalg.norm(daughter(params, 1.0))
    for a in (2.0, 4.0, 7.5):
        assert np.linalg.norm(daughter(params, a)) == pytest.approx(n1, rel=0.01)


def test_daughter_peak_at_centre():
    params = MorletParams()
    for a in (1.0, 3.0, 16.0):
        d = np.abs(daughter(params, a))
        assert np.argmax(d) == (d.size - 1) // 2


def test_daughter_invalid_scale():
    with pytest.raises(InvalidScale):
        daughter(MorletParams(), 0.0)
    with pytest.raises(InvalidScale):
        daughter(MorletParams(), -2.0)


def test_scale_to_frequency():
    params = MorletParams()
    assert scale_to_frequency(1.0, params) == pytest.approx(0.86397, abs=1e-5)
    # the 0.15 cycles/bp band sits near scale 5.76
    assert params.f0 / 0.15 == pytest.approx(5.76, abs=0.01)
    for a in (1.0, 3.3, 17.0):
        assert scale_to_frequency(2 * a, params) == pytest.approx(scale_to_frequency(a, params) / 2)
    with pytest.raises(InvalidScale):
        scale_to_frequency(0.0, params)


def test_scale_grid_validation():
    with pytest.raises(InvalidScale):
        ScaleGrid(np.array([1.0, 1.0, 2.0]))
    with pytest.raises(InvalidScale):
        ScaleGrid(np.array([-1.0, 2.0]))
    with pytest.raises(InvalidScale):
        ScaleGrid(np.array([]))


def test_scale_grid_constructors():
    log = ScaleGrid.logarithmic(1, 64, 64)
    assert len(log) == 64
    assert log.scales[0] == pytest.approx(1.0)
    assert log.scales[-1] == pytest.approx(64.0)
    lin = ScaleGrid.linear(1, 64, 64)
    assert np.allclose(lin.scales, np.arange(1, 65))


def test_cwt_zero_signal():
    s = cwt(np.zeros(256), ScaleGrid.logarithmic(1, 8, 4))
    assert np.all(s.modulus == 0)
    assert np.all(s.coefficients == 0)


def test_cwt_empty_signal():
    with pytest.raises(EmptySignal):
        cwt(np.array([]), ScaleGrid.logarithmic(1, 8, 4))


def test_cwt_scaling_linearity():
    rng = np.random.default_rng(6)
    f = rng.normal(size=300)
    grid = ScaleGrid.logarithmic(1, 8, 5)
    base = cwt(f, grid)
    scaled = cwt(2.5 * f, grid)
    top = np.abs(scaled.coefficients - 2.5 * base.coefficients).max()
    assert top / np.abs(base.coefficients).max() < 1e-12


def test_cwt_additivity():
    rng = np.random.default_rng(7)
    f, g = rng.normal(size=300), rng.normal(size=300)
    grid = ScaleGrid.logarithmic(1, 8, 5)
    lhs = cwt(f + g, grid).coefficients
    rhs = cwt(f, grid).coefficients + cwt(g, grid).coefficients
    assert np.abs(lhs - rhs).max() / np.abs(rhs).max() < 1e-12


def test_cwt_modulus_matches_coefficients():
    rng = np.random.default_rng(8)
    s = cwt(rng.normal(size=200), ScaleGrid.logarithmic(1, 4, 3))
    assert np.abs(s.modulus - np.abs(s.coefficients)).max() < 1e-12


def test_cwt_frequency_axis_decreasing():
    s = cwt(np.ones(64), ScaleGrid.logarithmic(1, 64, 16))
    assert np.all(np.diff(s.frequency_axis) < 0)


def test_cwt_workers_bitwise_stable():
    rng = np.random.default_rng(9)
    f = rng.normal(size=512)
    grid = ScaleGrid.logarithmic(1, 16, 8)
    serial = cwt(f, grid)
    threaded = cwt(f, grid, workers=4)
    assert serial.coefficients.tobytes() == threaded.coefficients.tobytes()


def test_cwt_matches_direct_oracle():
    rng = np.random.default_rng(10)
    f = rng.normal(size=512)
    grid = ScaleGrid(np.array([1.0, 2.0, 4.0, 8.0]))
    fast = cwt(f, grid)
    slow = cwt_direct(f, grid)
    rel = np.abs(fast.coefficients - slow.coefficients).max() / slow.modulus.max()
    assert rel < 1e-8


def test_cwt_direct_impulse_is_reversed_daughter():
    params = MorletParams(support_len=61)
    n, p = 257, 128
    impulse = np.zeros(n)
    impulse[p] = 1.0
    s = cwt_direct(impulse, ScaleGrid(np.array([2.0])), params)
    d = daughter(params, 2.0)
    half = (d.size - 1) // 2
    for b in range(n):
        u = p - b
        expected = np.conj(d[u + half]) if -half <= u <= half else 0.0
        assert s.coefficients[0, b] == pytest.approx(expected, abs=1e-15)


def test_shift_covariance_away_from_margin():
    rng = np.random.default_rng(11)
    params = MorletParams(support_len=61)
    n, shift = 2048, 37
    f = rng.normal(size=n)
    grid = ScaleGrid(np.array([1.0, 2.0, 4.0]))
    base = cwt(f, grid, params)
    moved = cwt(np.roll(f, shift), grid, params)
    margin = daughter(params, 4.0).size + shift
    inner = slice(margin, n - margin)
    err = np.abs(moved.modulus[:, shift:][:, inner] - base.modulus[:, inner]).max()
    assert err / base.modulus.max() < 1e-10


def test_ridge_tracks_sinusoid_period():
    t = np.arange(2048)
    sig = np.cos(2 * np.pi * t / 8.0)
    s = cwt(sig, ScaleGrid.logarithmic(1, 32, 48))
    ridge = int(np.argmax(s.modulus.mean(axis=1)))
    f_star = s.frequency_axis[ridge]
    assert abs(f_star - 1 / 8) / (1 / 8) < 0.05


def test_coi_mask_geometry():
    grid = ScaleGrid(np.array([2.0, 8.0]))
    s = cwt(np.ones(100), grid)
    for i, a in enumerate(grid.scales):
        m = coi_margin(a)
        assert m == math.ceil(3 * a)
        row = s.valid_mask[i]
        assert not row[:m].any() and not row[100 - m:].any()
        assert row[m:100 - m].all()


def test_scalogram_csv_round_trip(tmp_path):
    rng = np.random.default_rng(12)
    s = cwt(rng.normal(size=64), ScaleGrid.logarithmic(1, 8, 6))
    back = scalogram_from_csv(scalogram_to_csv(s))
    assert back.modulus.tobytes() == s.modulus.tobytes()
    assert np.array_equal(back.scales, s.scales)
    assert np.array_equal(back.coordinates, s.coordinates)
    assert np.array_equal(back.valid_mask, s.valid_mask)
    assert back.coefficients is None
    assert back.params == s.params

    path = tmp_path / "scalo.csv"
    write_scalogram_csv(s, path)
    assert read_scalogram_csv(path).modulus.tobytes() == s.modulus.tobytes()

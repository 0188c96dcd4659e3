import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from biphoton.errors import ConfigurationError, UsageError
from biphoton.interference import (
    BIPHOTON, DEFAULT_OFFSET, SINGLE_PHOTON, InterferenceTrace, MzScanSpec, dominant_frequency,
    ir_interference, mz_biphoton_rate, mz_scan, visibility, write_mz_csv,
)
from biphoton.spectra import SpectralAmplitude, flattop_spectrum, gaussian_spectrum
from biphoton.units import make_frequency_grid

from conftest import DC_FWHM, OMEGA0

PUMP_PERIOD = 2 * math.pi / (2 * OMEGA0)
IR_PERIOD = 2 * math.pi / OMEGA0


def test_default_offset():
    assert DEFAULT_OFFSET == pytest.approx(543.7e-15, rel=1e-4)
    assert PUMP_PERIOD == pytest.approx(1.774e-15, rel=1e-3)


def test_biphoton_rate_at_zero(grid, gaussian):
    integral = np.sum(gaussian.values.real) * grid.spacing
    assert mz_biphoton_rate(gaussian, 0.0) == pytest.approx((2 * integral) ** 2, rel=1e-14)


def test_biphoton_large_delay_limit(gaussian):
    r0 = mz_biphoton_rate(gaussian, 0.0)
    tau = 550e-15 + np.linspace(0, 2 * PUMP_PERIOD, 41)
    ratio = mz_biphoton_rate(gaussian, tau) / r0
    np.testing.assert_allclose(ratio, np.cos(OMEGA0 * tau) ** 2 / 4, atol=1e-12)


def test_biphoton_zero_and_period(gaussian):
    r0 = mz_biphoton_rate(gaussian, 0.0)
    n = 310  # omega0 * tau = pi/2 + n*pi, around 550 fs
    tau_zero = (math.pi / 2 + n * math.pi) / OMEGA0
    assert mz_biphoton_rate(gaussian, tau_zero) / r0 < 1e-12
    assert mz_biphoton_rate(gaussian, tau_zero - PUMP_PERIOD / 2) / r0 == pytest.approx(0.25, abs=1e-12)


def test_biphoton_small_delay(gaussian):
    r0 = mz_biphoton_rate(gaussian, 0.0)
    tau = np.linspace(-0.4e-15, 0.4e-15, 17)
    expected = ((np.cos(OMEGA0 * tau) + 1) / 2) ** 2
    np.testing.assert_allclose(mz_biphoton_rate(gaussian, tau) / r0, expected, atol=2e-4)


@settings(deadline=None)
@given(st.floats(-2e-12, 2e-12))
def test_biphoton_even_and_bounded(tau):
    grid = make_frequency_grid(OMEGA0, 16 * DC_FWHM, 512)
    g = gaussian_spectrum(grid, DC_FWHM)
    r0 = mz_biphoton_rate(g, 0.0)
    r = mz_biphoton_rate(g, tau)
    assert r == pytest.approx(mz_biphoton_rate(g, -tau), rel=1e-9, abs=1e-12 * r0)
    assert 0 <= r <= r0 * (1 + 1e-12)


def test_biphoton_rejects_asymmetric(grid, gaussian):
    shifted = SpectralAmplitude(grid, np.roll(gaussian.values, 5))
    with pytest.raises(UsageError, match="symmetric"):
        mz_biphoton_rate(shifted, 0.0)
    chirped = SpectralAmplitude(grid, gaussian.values * np.exp(1j * grid.offsets / DC_FWHM))
    with pytest.raises(UsageError, match="real"):
        mz_biphoton_rate(chirped, 0.0)


def test_ir_at_zero(grid, gaussian):
    assert ir_interference(gaussian, 0.0) == pytest.approx(2 * np.sum(gaussian.intensity) * grid.spacing, rel=1e-14)


def test_ir_gaussian_envelope(gaussian):
    # |g|^2 is a Gaussian of rms width sigma; its Fourier transform is the fringe envelope
    sigma = DC_FWHM / (2 * math.sqrt(2 * math.log(2)))
    tau = np.linspace(-150e-15, 150e-15, 1201)
    norm = ir_interference(gaussian, 0.0) / 2
    expected = 1 + np.exp(-(sigma * tau) ** 2 / 2) * np.cos(OMEGA0 * tau)
    np.testing.assert_allclose(ir_interference(gaussian, tau) / norm, expected, atol=1e-6)


def test_ir_dies_out_at_550fs(gaussian):
    tau = 550e-15 + np.linspace(-2e-15, 2e-15, 257)
    trace = InterferenceTrace.normalized(tau, ir_interference(gaussian, tau), SINGLE_PHOTON, OMEGA0)
    assert visibility(trace, 550e-15, 4e-15) < 0.01


# -- visibility estimator ---------------------------------------------------------

@pytest.mark.parametrize("offset", [0.0, 0.123, 0.377])
def test_visibility_of_cos_squared(offset):
    tau = np.linspace(0, 3 * PUMP_PERIOD, 3 * 256 + 1) + offset * PUMP_PERIOD
    trace = InterferenceTrace(tau, np.cos(OMEGA0 * tau) ** 2, BIPHOTON, OMEGA0)
    assert visibility(trace, tau.mean(), 2 * PUMP_PERIOD) == pytest.approx(1.0, abs=1e-6)


def test_visibility_resamples_coarse_trace():
    tau = np.linspace(0, 4 * PUMP_PERIOD, 4 * 12 + 1) + 0.3 * PUMP_PERIOD
    trace = InterferenceTrace(tau, np.cos(OMEGA0 * tau) ** 2, BIPHOTON, OMEGA0)
    assert visibility(trace, tau.mean(), 3 * PUMP_PERIOD) == pytest.approx(1.0, abs=1e-3)


def test_visibility_of_constant():
    tau = np.linspace(0, 3 * PUMP_PERIOD, 200)
    trace = InterferenceTrace(tau, np.full(200, 0.7), BIPHOTON, OMEGA0)
    assert visibility(trace, tau.mean(), 2 * PUMP_PERIOD) == 0.0


def test_visibility_window_too_narrow():
    tau = np.linspace(0, 3 * PUMP_PERIOD, 200)
    trace = InterferenceTrace(tau, np.full(200, 0.7), BIPHOTON, OMEGA0)
    with pytest.raises(UsageError):
        visibility(trace, tau.mean(), 0.5 * PUMP_PERIOD)
    with pytest.raises(UsageError):
        visibility(trace, 100 * PUMP_PERIOD, 2 * PUMP_PERIOD)


def test_trace_validation():
    with pytest.raises(UsageError):
        InterferenceTrace([0.0, 0.0], [0.1, 0.2], BIPHOTON, OMEGA0)
    with pytest.raises(UsageError):
        InterferenceTrace([0.0, 1.0], [0.1, 1.5], BIPHOTON, OMEGA0)
    with pytest.raises(UsageError):
        InterferenceTrace([0.0, 1.0], [0.1, 0.5], "triphoton", OMEGA0)


# -- full scans -----------------------------------------------------------------

@pytest.fixture(scope="module")
def wide_scan(gaussian):
    coherence = 4 * math.log(2) / DC_FWHM  # ~54 fs intensity correlation width
    spec = MzScanSpec(gaussian, -3 * coherence, 3 * coherence, PUMP_PERIOD / 64, offset=0.0)
    return mz_scan(spec)


def test_scan_normalized(wide_scan):
    biphoton, single = wide_scan
    assert biphoton.values.max() == 1.0 and single.values.max() == 1.0
    assert biphoton.kind == BIPHOTON and single.kind == SINGLE_PHOTON


def test_scan_visibilities(wide_scan):
    biphoton, single = wide_scan
    tau = biphoton.retardations
    centers = np.linspace(tau[0] + IR_PERIOD, tau[-1] - IR_PERIOD, 25)
    v_bi = [visibility(biphoton, c, IR_PERIOD * 1.01) for c in centers]
    v_ir = [visibility(single, c, IR_PERIOD * 1.01) for c in centers]
    assert min(v_bi) >= 0.99
    assert v_ir[len(v_ir) // 2] > 0.99
    assert v_ir[0] < 0.01 and v_ir[-1] < 0.01


def test_scan_fringe_period(gaussian):
    spec = MzScanSpec(gaussian, -60e-15, 60e-15, PUMP_PERIOD / 16)
    biphoton, _ = mz_scan(spec)
    freq, bin_width = dominant_frequency(biphoton)
    assert abs(freq - 2 * OMEGA0 / (2 * math.pi)) <= bin_width
    assert 1 / freq == pytest.approx(1.77e-15, rel=0.02)


def test_scan_step_guard(gaussian):
    with pytest.raises(ConfigurationError):
        MzScanSpec(gaussian, 0.0, 10e-15, PUMP_PERIOD / 4)


def test_quadratic_relation_flat_top():
    grid = make_frequency_grid(OMEGA0, 32 * DC_FWHM, 4096)
    g = flattop_spectrum(grid, 100.5 * grid.spacing)  # edges between samples: |g|^2 == g
    np.testing.assert_array_equal(g.intensity, g.values.real)
    r0, i0 = mz_biphoton_rate(g, 0.0), ir_interference(g, 0.0)
    ratios = []
    for tau in (1e-18, 1e-17, 1e-16):
        diff = mz_biphoton_rate(g, tau) / r0 - (ir_interference(g, tau) / i0) ** 2
        ratios.append(abs(diff) / (OMEGA0 * tau) ** 2)
    assert ratios[2] < 1e-3
    assert ratios[1] < ratios[2] / 50 and ratios[0] < ratios[1] / 50


def test_mz_csv(wide_scan, tmp_path):
    path = tmp_path / "mz.csv"
    write_mz_csv(path, *wide_scan)
    lines = path.read_text().splitlines()
    assert lines[0] == "tau_s,biphoton_rate_rel,ir_intensity_rel"
    assert len(lines) == wide_scan[0].retardations.size + 1

import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from biphoton.errors import ConfigurationError, DomainError
from biphoton.units import (
    FrequencyGrid, angular_frequency_to_wavelength, bandwidth_hz_to_nm, bandwidth_nm_to_hz,
    conjugate_time_grid, make_frequency_grid, wavelength_to_angular_frequency,
)


def test_1064nm_angular_frequency():
    expected = 2 * math.pi * 299792458.0 / 1064e-9
    assert wavelength_to_angular_frequency(1064e-9) == pytest.approx(expected, rel=1e-15)
    assert wavelength_to_angular_frequency(1064e-9) == pytest.approx(1.7703e15, rel=1e-4)


def test_halving_wavelength_doubles_frequency():
    assert wavelength_to_angular_frequency(532e-9) == pytest.approx(
        2 * wavelength_to_angular_frequency(1064e-9), rel=1e-15)


@pytest.mark.parametrize("bad", [0.0, -1e-6, math.nan, math.inf])
def test_wavelength_domain(bad):
    with pytest.raises(DomainError):
        wavelength_to_angular_frequency(bad)


@pytest.mark.parametrize("dl, center, expected, rel", [
    (31e-9, 1064e-9, 8.2e12, 1e-2),
    (0.0, 1064e-9, 0.0, 0),
    (0.1e-9, 532e-9, 299792458.0 * 0.1e-9 / 532e-9**2, 1e-15),
])
def test_bandwidth_conversion(dl, center, expected, rel):
    assert bandwidth_nm_to_hz(dl, center) == pytest.approx(expected, rel=rel, abs=0)


def test_uc_bandwidth_magnitude():
    assert bandwidth_nm_to_hz(0.1e-9, 532e-9) == pytest.approx(1.06e11, rel=5e-3)


@pytest.mark.parametrize("center", [0.0, -1.0])
def test_bandwidth_bad_center(center):
    with pytest.raises(DomainError):
        bandwidth_nm_to_hz(1e-9, center)


def test_bandwidth_inverse():
    assert bandwidth_hz_to_nm(bandwidth_nm_to_hz(31e-9, 1064e-9), 1064e-9) == pytest.approx(31e-9)


def test_make_grid_center_point():
    w0 = wavelength_to_angular_frequency(1064e-9)
    grid = make_frequency_grid(w0, 1e15, 4096)
    assert grid.spacing == 1e15 / 4096
    assert grid.points[grid.center_index] == w0
    assert grid.pump == 2 * w0
    assert conjugate_time_grid(grid).spacing == pytest.approx(2 * math.pi / 1e15, rel=1e-15)


@pytest.mark.parametrize("span, n", [(1e15, 7), (1e15, 6), (1e15, 4095), (0.0, 4096), (-1.0, 4096)])
def test_make_grid_rejects(span, n):
    with pytest.raises(ConfigurationError):
        make_frequency_grid(1.77e15, span, n)


def test_grid_must_stay_positive():
    with pytest.raises(ConfigurationError):
        make_frequency_grid(1.0e15, 2.5e15, 64)


def test_time_grid_contains_zero():
    tg = conjugate_time_grid(make_frequency_grid(1.77e15, 1e15, 64))
    assert tg.points[tg.zero_index] == 0.0
    assert tg.t_min == -32 * tg.spacing and tg.t_max == 31 * tg.spacing


@given(st.floats(min_value=1e12, max_value=1e17, allow_nan=False))
def test_frequency_wavelength_round_trip(omega):
    back = wavelength_to_angular_frequency(angular_frequency_to_wavelength(omega))
    assert abs(back - omega) / omega < 1e-12


@given(st.floats(min_value=1e10, max_value=1e14), st.integers(min_value=4, max_value=4096))
def test_fourier_relation(spacing, half):
    grid = FrequencyGrid(1e18, spacing, 2 * half)
    tg = conjugate_time_grid(grid)
    assert grid.count * grid.spacing * tg.spacing == pytest.approx(2 * math.pi, rel=1e-14)


@given(st.integers(min_value=4, max_value=2048))
def test_mirror_symmetry(half):
    grid = FrequencyGrid(1e18, 1e11, 2 * half)
    m = grid.mirror_index
    # every non-Nyquist point has an exact partner; index 0 maps to itself
    np.testing.assert_array_equal(grid.offsets[1:] + grid.offsets[m[1:]], 0.0)
    assert m[0] == 0
    np.testing.assert_array_equal(m[m], np.arange(grid.count))

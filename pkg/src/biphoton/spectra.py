"""Down-conversion spectra, SLM phase masks and the two-photon pair filter.

A single SLM sits in the spectral Fourier plane and is traversed by both
photons, so the signal and idler filters are the same phase function
``M(omega)`` read out in opposite half-bands.

Pair-filter convention
----------------------
The signal is the higher-energy photon. A pair with the signal at
``omega0 + d`` (``d >= 0``) picks up ``theta(d) = M(omega0 + d) + M(omega0 - d)``.
The spectrum ``g`` is stored over the full band; its lower half is the
label-swapped copy of the upper half and carries the conjugate factor, so

    Phi(omega0 + d) = exp(+i theta(d)),   Phi(omega0 - d) = exp(-i theta(d)).

With this convention the opposite-slope mask is an exact delay
``exp(-i (omega - omega0) T)`` and real (0/pi) masks give a real, symmetric
filter.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy import optimize

from ._profile import fwhm
from .errors import CalibrationError, ConfigurationError, UsageError
from .units import FrequencyGrid

TWO_PI = 2 * math.pi


def _readonly(values, dtype):
    arr = np.array(values, dtype=dtype)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class SpectralAmplitude:
    """Complex pair amplitude ``g(omega)`` sampled on ``grid``."""

    grid: FrequencyGrid
    values: np.ndarray

    def __post_init__(self):
        values = _readonly(self.values, complex)
        if values.shape != (self.grid.count,):
            raise UsageError(f"expected {self.grid.count} samples, got shape {values.shape}")
        if not np.all(np.isfinite(values)):
            raise ConfigurationError("spectral amplitude contains non-finite values")
        object.__setattr__(self, "values", values)

    @property
    def intensity(self) -> np.ndarray:
        return np.abs(self.values) ** 2

    def intensity_fwhm(self) -> float:
        """FWHM of ``|g|^2`` in rad/s (linear interpolation between samples)."""
        return fwhm(self.grid.offsets, self.intensity)

    def is_symmetric(self, rtol=1e-9) -> bool:
        """True when ``g(omega) == g(omega_p - omega)`` at every grid point."""
        v = self.values
        return bool(np.all(np.abs(v - v[self.grid.mirror_index]) <= rtol * np.abs(v).max()))

    def is_real(self, rtol=1e-12) -> bool:
        return bool(np.all(np.abs(self.values.imag) <= rtol * np.abs(self.values).max()))

    def __add__(self, other):
        if other.grid != self.grid:
            raise UsageError("spectra live on different grids")
        return SpectralAmplitude(self.grid, self.values + other.values)


@dataclass(frozen=True, eq=False)
class PhaseMask:
    """Physical SLM phase [rad] per grid point."""

    grid: FrequencyGrid
    phase: np.ndarray

    def __post_init__(self):
        phase = _readonly(self.phase, float)
        if phase.shape != (self.grid.count,):
            raise UsageError(f"expected {self.grid.count} samples, got shape {phase.shape}")
        if not np.all(np.isfinite(phase)):
            raise ConfigurationError("mask phase contains non-finite values")
        object.__setattr__(self, "phase", phase)

    def __add__(self, other):
        if other.grid != self.grid:
            raise UsageError("masks live on different grids")
        return PhaseMask(self.grid, self.phase + other.phase)


@dataclass(frozen=True, eq=False)
class PairFilter:
    """Unit-modulus two-photon filter ``Phi(omega)``."""

    grid: FrequencyGrid
    values: np.ndarray

    def __post_init__(self):
        values = _readonly(self.values, complex)
        if values.shape != (self.grid.count,):
            raise UsageError(f"expected {self.grid.count} samples, got shape {values.shape}")
        if not np.allclose(np.abs(values), 1.0, rtol=0, atol=1e-12):
            raise ConfigurationError("pair filter must have unit modulus")
        object.__setattr__(self, "values", values)

    @classmethod
    def unity(cls, grid):
        return cls(grid, np.ones(grid.count, dtype=complex))

    def __mul__(self, other):
        if other.grid != self.grid:
            raise UsageError("filters live on different grids")
        return PairFilter(self.grid, self.values * other.values)


# -- spectra ---------------------------------------------------------------

def _check_width(grid, width, name):
    if not (math.isfinite(width) and 0 < width < grid.span / 2):
        raise ConfigurationError(
            f"{name} must lie in (0, span/2) = (0, {grid.span / 2:.6g}) rad/s, got {width!r}")


def gaussian_spectrum(grid: FrequencyGrid, fwhm: float) -> SpectralAmplitude:
    """Real Gaussian amplitude whose intensity ``|g|^2`` has FWHM ``fwhm`` [rad/s]."""
    _check_width(grid, fwhm, "fwhm")
    d = grid.offsets
    return SpectralAmplitude(grid, np.exp(-2 * math.log(2) * (d / fwhm) ** 2))


def _sinc(x):
    return np.sinc(np.asarray(x) / math.pi)


def sinc_half_power_argument() -> float:
    """Positive root of ``sinc(x)**2 = 1/2`` inside the main lobe."""
    try:
        return optimize.brentq(lambda x: _sinc(x) ** 2 - 0.5, 1e-6, math.pi - 1e-6, xtol=1e-15)
    except ValueError as exc:
        raise CalibrationError("no half-power root of sinc^2 in the main lobe") from exc


def sinc_phasematch_spectrum(grid: FrequencyGrid, delta_dc: float) -> SpectralAmplitude:
    """Degenerate type-I phase-matching amplitude ``sinc(kappa * (omega - omega0)**2)``.

    ``kappa`` is chosen so that ``|g|^2`` has FWHM ``delta_dc`` [rad/s]. The
    amplitude is real, i.e. the spectral phase is flat inside the main lobe;
    the side lobes alternate in sign.
    """
    _check_width(grid, delta_dc, "delta_dc")
    kappa = sinc_half_power_argument() / (delta_dc / 2) ** 2
    return SpectralAmplitude(grid, _sinc(kappa * grid.offsets**2))


def flattop_spectrum(grid: FrequencyGrid, half_width: float) -> SpectralAmplitude:
    """Unit amplitude for ``|omega - omega0| < half_width``, zero outside.

    A sample lying exactly on an edge gets weight 1/2 (trapezoid rule), so the
    grid sum reproduces the continuous box integral to second order.
    """
    _check_width(grid, half_width, "half_width")
    d = np.abs(grid.offsets)
    tol = 1e-9 * grid.spacing
    values = np.where(d < half_width - tol, 1.0, 0.0)
    values[np.abs(d - half_width) <= tol] = 0.5
    return SpectralAmplitude(grid, values)


# -- masks -----------------------------------------------------------------

def zero_mask(grid: FrequencyGrid) -> PhaseMask:
    return PhaseMask(grid, np.zeros(grid.count))


def mask_opposite_linear(grid: FrequencyGrid, delay: float) -> PhaseMask:
    """Opposite linear slopes on the two half-bands.

    The signal half (``omega > omega0``) gets slope ``-delay/2`` and the idler
    half slope ``+delay/2``: ``phase = -(delay/2) * |omega - omega0|``. The
    resulting pair filter delays the signal by ``delay`` relative to the idler.
    """
    if not math.isfinite(delay):
        raise ConfigurationError(f"delay must be finite, got {delay!r}")
    excursion = abs(delay) / 2 * (grid.count // 2) * grid.spacing
    if excursion >= grid.count * math.pi:
        raise ConfigurationError(
            f"delay {delay!r} s gives a phase excursion of {excursion:.3g} rad, "
            f"above the sampling limit N*pi = {grid.count * math.pi:.3g}")
    return PhaseMask(grid, -(delay / 2) * np.abs(grid.offsets))


def mask_pi_step(grid: FrequencyGrid, step: float) -> PhaseMask:
    """Phase ``pi`` above ``step`` [rad/s, absolute], zero at and below it."""
    if not (math.isfinite(step) and grid.points[0] <= step < grid.points[-1]):
        raise ConfigurationError(f"step frequency {step!r} rad/s lies outside the grid")
    return PhaseMask(grid, np.where(grid.offsets > step - grid.center, math.pi, 0.0))


def compose_pair_filter(mask: PhaseMask) -> PairFilter:
    """Effective pair filter of a single SLM mask (see module docstring)."""
    grid = mask.grid
    total = mask.phase + mask.phase[grid.mirror_index]
    sign = np.where(grid.offsets >= 0, 1.0, -1.0)
    return PairFilter(grid, np.exp(1j * sign * total))


def slm_quantize(mask: PhaseMask, pixels: int, levels: int) -> PhaseMask:
    """Model a pixelated SLM with a finite number of phase levels.

    The grid is split into ``pixels`` contiguous blocks; each block takes its
    mean phase, snapped to the nearest of ``levels`` values ``2*pi*j/levels``.
    """
    n = mask.grid.count
    if int(pixels) != pixels or pixels < 1 or pixels > n:
        raise ConfigurationError(f"pixels must be an integer in [1, {n}], got {pixels!r}")
    if int(levels) != levels or levels < 2:
        raise ConfigurationError(f"levels must be an integer >= 2, got {levels!r}")
    step = TWO_PI / levels
    out = np.empty(n)
    for block in np.array_split(np.arange(n), int(pixels)):
        level = round(np.mod(mask.phase[block].mean(), TWO_PI) / step) % levels
        out[block] = level * step
    return PhaseMask(mask.grid, out)


# -- text I/O ----------------------------------------------------------------

def save_mask(mask: PhaseMask, path) -> None:
    """Write two columns: angular frequency [rad/s], phase [rad]."""
    data = np.column_stack([mask.grid.points, mask.phase])
    np.savetxt(path, data, fmt="%.17g", header="omega_rad_per_s phase_rad")


def load_mask(path, grid: FrequencyGrid) -> PhaseMask:
    """Read a two-column mask file; its frequency column must match ``grid``.

    A missing or unreadable file raises ``OSError``; malformed content raises
    :class:`ConfigurationError`.
    """
    try:
        data = np.loadtxt(Path(path), ndmin=2)
    except ValueError as exc:
        raise ConfigurationError(f"cannot read mask file {path}: {exc}") from exc
    if data.shape != (grid.count, 2):
        raise ConfigurationError(
            f"mask file {path} has shape {data.shape}, expected ({grid.count}, 2)")
    if not np.allclose(data[:, 0], grid.points, rtol=0, atol=1e-6 * grid.spacing):
        raise ConfigurationError(f"mask file {path} frequency column does not match the grid")
    return PhaseMask(grid, data[:, 1])

"""Unit conversions and the frequency/time sampling lattice.

All spectral bookkeeping is done in angular frequency [rad/s]. Ordinary
frequencies [Hz] only appear at the boundaries (bandwidths quoted in Hz,
photon fluxes).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy import constants

from .errors import ConfigurationError, DomainError

C = constants.c  # 299 792 458 m/s, exact
H = constants.h  # 6.626 070 15e-34 J s, exact


def _check_positive(value, name):
    if not np.all(np.isfinite(value)) or np.any(np.asarray(value) <= 0):
        raise DomainError(f"{name} must be positive and finite, got {value!r}")


def wavelength_to_angular_frequency(wavelength):
    """Vacuum wavelength [m] -> angular frequency 2*pi*c/lambda [rad/s]."""
    _check_positive(wavelength, "wavelength")
    return 2 * math.pi * C / np.asarray(wavelength, dtype=float)[()]


def angular_frequency_to_wavelength(omega):
    """Angular frequency [rad/s] -> vacuum wavelength [m]."""
    _check_positive(omega, "angular frequency")
    return 2 * math.pi * C / np.asarray(omega, dtype=float)[()]


def bandwidth_nm_to_hz(delta_wavelength, center_wavelength):
    """First-order conversion of a wavelength bandwidth to Hz.

    Both arguments are lengths in metres despite the name; the result is
    ``c * delta_wavelength / center_wavelength**2``.
    """
    _check_positive(center_wavelength, "center wavelength")
    if not math.isfinite(delta_wavelength) or delta_wavelength < 0:
        raise DomainError(f"bandwidth must be >= 0, got {delta_wavelength!r}")
    return C * delta_wavelength / center_wavelength**2


def bandwidth_hz_to_nm(delta_frequency, center_wavelength):
    """Inverse of :func:`bandwidth_nm_to_hz` (lengths in metres)."""
    _check_positive(center_wavelength, "center wavelength")
    if not math.isfinite(delta_frequency) or delta_frequency < 0:
        raise DomainError(f"bandwidth must be >= 0, got {delta_frequency!r}")
    return delta_frequency * center_wavelength**2 / C


@dataclass(frozen=True)
class TimeGrid:
    """Relative-time axis conjugate to a :class:`FrequencyGrid`.

    Sample ``j`` sits at ``(j - count/2) * spacing`` so ``t = 0`` is index
    ``count // 2``.
    """

    spacing: float
    count: int

    @cached_property
    def points(self) -> np.ndarray:
        return (np.arange(self.count) - self.count // 2) * self.spacing

    @property
    def zero_index(self) -> int:
        return self.count // 2

    @property
    def t_min(self) -> float:
        return -(self.count // 2) * self.spacing

    @property
    def t_max(self) -> float:
        return (self.count - 1 - self.count // 2) * self.spacing


@dataclass(frozen=True)
class FrequencyGrid:
    """Uniform angular-frequency axis centred on the degeneracy point.

    Point ``k`` is ``center + (k - count/2) * spacing``. The grid is mirror
    symmetric about ``center`` under the periodic (FFT) convention: index
    ``k`` maps onto ``(count - k) % count``, so index 0 (the Nyquist bin) is
    its own mirror.
    """

    center: float
    spacing: float
    count: int

    def __post_init__(self):
        if not (math.isfinite(self.center) and self.center > 0):
            raise ConfigurationError(f"grid center must be positive, got {self.center!r}")
        if not (math.isfinite(self.spacing) and self.spacing > 0):
            raise ConfigurationError(f"grid spacing must be positive, got {self.spacing!r}")
        if int(self.count) != self.count or self.count < 8 or self.count % 2:
            raise ConfigurationError(f"grid size must be an even integer >= 8, got {self.count!r}")
        if self.center - (self.count // 2) * self.spacing <= 0:
            raise ConfigurationError("grid extends to non-positive frequencies; reduce the span")

    @property
    def pump(self) -> float:
        """Pump angular frequency, twice the grid centre."""
        return 2.0 * self.center

    @property
    def span(self) -> float:
        return self.count * self.spacing

    @cached_property
    def offsets(self) -> np.ndarray:
        """Detuning ``omega - center`` of each point, computed without cancellation."""
        return (np.arange(self.count) - self.count // 2) * self.spacing

    @cached_property
    def points(self) -> np.ndarray:
        return self.center + self.offsets

    @cached_property
    def mirror_index(self) -> np.ndarray:
        """Index of ``pump - omega`` for every point."""
        return (self.count - np.arange(self.count)) % self.count

    @property
    def center_index(self) -> int:
        return self.count // 2

    def index_of(self, omega: float) -> int:
        """Nearest grid index to ``omega``."""
        return int(round((omega - self.center) / self.spacing)) + self.count // 2

    def contains(self, omega: float) -> bool:
        return self.points[0] <= omega <= self.points[-1]


def make_frequency_grid(center, span, count) -> FrequencyGrid:
    """Grid of ``count`` points covering ``span`` rad/s around ``center``."""
    if not (math.isfinite(span) and span > 0):
        raise ConfigurationError(f"span must be positive, got {span!r}")
    if int(count) != count or count < 8 or count % 2:
        raise ConfigurationError(f"grid size must be an even integer >= 8, got {count!r}")
    return FrequencyGrid(float(center), span / count, int(count))


def conjugate_time_grid(grid: FrequencyGrid) -> TimeGrid:
    """Time grid with ``dt = 2*pi / (N * d_omega)``."""
    return TimeGrid(2 * math.pi / (grid.count * grid.spacing), grid.count)

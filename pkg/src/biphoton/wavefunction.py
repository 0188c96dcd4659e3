"""Two-photon wavefunction: relative-time amplitude and the factorized psi.

The relative-time amplitude is

    G(t) = (1 / 2 pi) * integral g(omega) Phi(omega) exp(i (omega - omega0) t) d omega,

kept in baseband (the ``exp(i omega0 t)`` carrier is removed and recorded).
With this normalization the grid sums obey Parseval exactly:
``sum |G|^2 dt == sum |g Phi|^2 d_omega / (2 pi)``.

The full wavefunction ``psi(t_s, t_i) = exp(-dp^2 (t_s + t_i)^2 / 32) G(t_s - t_i)``
is never materialized on a 2D grid; the sum-time envelope (microseconds) and
the relative-time structure (femtoseconds) are evaluated separately.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._profile import half_max_regions
from .errors import MultimodalError, RangeError, UsageError
from .spectra import PairFilter, SpectralAmplitude
from .units import TimeGrid, conjugate_time_grid

PEAK_TIE_RTOL = 1e-9


@dataclass(frozen=True, eq=False)
class TimeAmplitude:
    """Sampled relative-time amplitude ``G(t)``.

    ``values`` are not normalized; ``peak`` records ``max |G|`` so callers can
    normalize without losing the Parseval scale.
    """

    time_grid: TimeGrid
    values: np.ndarray
    carrier: float

    def __post_init__(self):
        values = np.array(self.values, dtype=complex)
        values.setflags(write=False)
        if values.shape != (self.time_grid.count,):
            raise UsageError("time amplitude does not match its time grid")
        object.__setattr__(self, "values", values)

    @property
    def times(self) -> np.ndarray:
        return self.time_grid.points

    @property
    def peak(self) -> float:
        return float(np.abs(self.values).max())

    @property
    def intensity(self) -> np.ndarray:
        return np.abs(self.values) ** 2

    def normalized(self) -> np.ndarray:
        return self.values / self.peak

    def energy(self) -> float:
        """``sum |G|^2 dt``."""
        return float(np.sum(self.intensity) * self.time_grid.spacing)

    def peak_time(self) -> float:
        return float(self.times[np.argmax(self.intensity)])

    def at(self, t):
        """``G`` at arbitrary relative times by linear interpolation."""
        t = np.asarray(t, dtype=float)
        grid = self.time_grid
        if np.any(~np.isfinite(t)) or np.any(t < grid.t_min) or np.any(t > grid.t_max):
            raise RangeError(
                f"relative time outside the sampled window [{grid.t_min:.6g}, {grid.t_max:.6g}] s")
        x = self.times
        return np.interp(t, x, self.values.real) + 1j * np.interp(t, x, self.values.imag)


def relative_wavefunction(spectrum: SpectralAmplitude, pair_filter: PairFilter) -> TimeAmplitude:
    """Inverse Fourier transform of ``g * Phi`` onto the conjugate time grid."""
    grid = spectrum.grid
    if pair_filter.grid != grid:
        raise UsageError("spectrum and pair filter are sampled on different grids")
    shaped = spectrum.values * pair_filter.values
    n = grid.count
    values = grid.spacing / (2 * math.pi) * n * np.fft.fftshift(np.fft.ifft(np.fft.ifftshift(shaped)))
    return TimeAmplitude(conjugate_time_grid(grid), values, grid.center)


def oracle_dft(spectrum: SpectralAmplitude, pair_filter: PairFilter, times, chunk=256):
    """Direct quadrature of ``G`` at arbitrary times.

    A plain Riemann sum over the grid, written independently of the FFT path
    so it can serve as a cross-check.
    """
    grid = spectrum.grid
    if pair_filter.grid != grid:
        raise UsageError("spectrum and pair filter are sampled on different grids")
    shaped = spectrum.values * pair_filter.values
    detuning = grid.points - grid.center
    times = np.atleast_1d(np.asarray(times, dtype=float))
    out = np.empty(times.shape, dtype=complex)
    for start in range(0, times.size, chunk):
        t = times[start:start + chunk]
        kernel = np.exp(1j * np.outer(t, detuning))
        out[start:start + chunk] = kernel @ shaped
    return out * grid.spacing / (2 * math.pi)


@dataclass(frozen=True, eq=False)
class TwoPhotonWavefunction:
    """``psi(t_s, t_i)`` as a pump envelope times the relative amplitude.

    ``pump_bandwidth`` is in rad/s (``2 pi`` times the FWHM in Hz).
    """

    relative: TimeAmplitude
    pump_bandwidth: float

    def envelope(self, t_sum):
        return np.exp(-(self.pump_bandwidth ** 2) * np.asarray(t_sum) ** 2 / 32)

    def amplitude(self, t_s, t_i):
        t_s = np.asarray(t_s, dtype=float)
        t_i = np.asarray(t_i, dtype=float)
        return self.envelope(t_s + t_i) * self.relative.at(t_s - t_i)


def two_photon_density(wf: TwoPhotonWavefunction, t_s, t_i):
    """Joint detection probability density ``|psi(t_s, t_i)|^2``."""
    return np.abs(wf.amplitude(t_s, t_i)) ** 2


def lobe_widths(G: TimeAmplitude) -> list[float]:
    """Half-maximum widths of every contiguous region above ``max|G|^2 / 2``."""
    return [right - left for left, right in half_max_regions(G.times, G.intensity)]


def is_multimodal(G: TimeAmplitude) -> bool:
    intensity = G.intensity
    top = np.flatnonzero(intensity >= (1 - PEAK_TIE_RTOL) * intensity.max())
    if np.any(np.diff(top) > 1):
        return True
    return len(half_max_regions(G.times, intensity)) > 1


def correlation_fwhm(G: TimeAmplitude) -> float:
    """FWHM of ``|G(t)|^2`` [s].

    Raises :class:`MultimodalError` (with the per-lobe widths attached) when
    the profile has more than one lobe above half maximum or a tied maximum.
    """
    widths = lobe_widths(G)
    if is_multimodal(G):
        raise MultimodalError(f"|G|^2 has {len(widths)} lobes above half maximum", widths)
    return widths[0]


def save_time_amplitude(G: TimeAmplitude, path) -> None:
    """Write three columns: t [s], Re G, Im G."""
    data = np.column_stack([G.times, G.values.real, G.values.imag])
    np.savetxt(path, data, fmt="%.17g", header="t_s re_G im_G")


def load_time_amplitude(path, carrier: float) -> TimeAmplitude:
    data = np.loadtxt(path, ndmin=2)
    t = data[:, 0]
    spacing = (t[-1] - t[0]) / (len(t) - 1)
    return TimeAmplitude(TimeGrid(spacing, len(t)), data[:, 1] + 1j * data[:, 2], carrier)

"""Mach-Zehnder interference of down-converted light.

The interferometer is reduced to a scalar retardation ``tau`` between its
arms. Two traces are produced:

* biphoton (SFG) rate
  ``R(tau) ~ | integral g(omega) [cos(omega0 tau) + cos((omega - omega0) tau)] d omega |^2``,
  which requires a real ``g`` symmetric about ``omega0``;
* single-photon (IR) power ``I(tau) ~ integral |g|^2 (1 + cos(omega tau)) d omega``.
"""
from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass

import numpy as np
from scipy.interpolate import CubicSpline

from .errors import ConfigurationError, UsageError
from .spectra import SpectralAmplitude
from .units import C

BIPHOTON = "biphoton"
SINGLE_PHOTON = "single-photon"
MIN_POINTS_PER_PERIOD = 32

CALCITE_RETARDATION = 163e-6  # m
DEFAULT_OFFSET = CALCITE_RETARDATION / C


def _check_biphoton_assumptions(spectrum: SpectralAmplitude):
    if not spectrum.is_real():
        raise UsageError("mz_biphoton_rate assumes a real spectrum g(omega) (flat spectral phase)")
    if not spectrum.is_symmetric():
        raise UsageError("mz_biphoton_rate assumes g(omega) symmetric about omega0 = omega_p/2")


def _cos_sin_moments(weights, offsets, tau, chunk=512):
    tau = np.atleast_1d(np.asarray(tau, dtype=float))
    cos_m = np.empty(tau.shape)
    sin_m = np.empty(tau.shape)
    for start in range(0, tau.size, chunk):
        phase = np.outer(tau[start:start + chunk], offsets)
        cos_m[start:start + chunk] = np.cos(phase) @ weights
        sin_m[start:start + chunk] = np.sin(phase) @ weights
    return tau, cos_m, sin_m


def mz_biphoton_rate(spectrum: SpectralAmplitude, tau):
    """Unnormalized two-photon coincidence rate behind the interferometer."""
    _check_biphoton_assumptions(spectrum)
    grid = spectrum.grid
    g = spectrum.values.real
    scalar = np.ndim(tau) == 0
    tau, cos_m, _ = _cos_sin_moments(g, grid.offsets, tau)
    amplitude = grid.spacing * (np.cos(grid.center * tau) * g.sum() + cos_m)
    rate = amplitude**2
    return float(rate[0]) if scalar else rate


def ir_interference(spectrum: SpectralAmplitude, tau):
    """Unnormalized single-photon (IR) power behind the interferometer."""
    grid = spectrum.grid
    w = spectrum.intensity
    scalar = np.ndim(tau) == 0
    tau, cos_m, sin_m = _cos_sin_moments(w, grid.offsets, tau)
    carrier = grid.center * tau
    # cos((omega0 + d) tau) expanded so the fast carrier is applied once per tau
    power = grid.spacing * (w.sum() + np.cos(carrier) * cos_m - np.sin(carrier) * sin_m)
    power = np.clip(power, 0.0, None)
    return float(power[0]) if scalar else power


@dataclass(frozen=True, eq=False)
class InterferenceTrace:
    """Interference signal versus retardation, normalized to max 1.

    ``carrier`` is the degeneracy angular frequency; it fixes the fringe
    period (``pi/carrier`` for the biphoton trace, ``2 pi/carrier`` for IR).
    """

    retardations: np.ndarray
    values: np.ndarray
    kind: str
    carrier: float

    def __post_init__(self):
        tau = np.array(self.retardations, dtype=float)
        values = np.array(self.values, dtype=float)
        if self.kind not in (BIPHOTON, SINGLE_PHOTON):
            raise UsageError(f"unknown trace kind {self.kind!r}")
        if tau.shape != values.shape or tau.ndim != 1:
            raise UsageError("retardations and values must be 1-D arrays of equal length")
        if tau.size > 1 and np.any(np.diff(tau) <= 0):
            raise UsageError("retardations must be strictly increasing")
        if np.any(values < 0) or np.any(values > 1 + 1e-12):
            raise UsageError("trace values must lie in [0, 1]")
        tau.setflags(write=False)
        values.setflags(write=False)
        object.__setattr__(self, "retardations", tau)
        object.__setattr__(self, "values", values)

    @classmethod
    def normalized(cls, retardations, raw, kind, carrier):
        raw = np.asarray(raw, dtype=float)
        top = raw.max()
        return cls(retardations, raw / top if top > 0 else raw, kind, carrier)

    @property
    def period(self) -> float:
        return (math.pi if self.kind == BIPHOTON else 2 * math.pi) / self.carrier


def _vertex(y, i):
    """Extremum value of the parabola through samples ``i-1, i, i+1``."""
    if i == 0 or i == len(y) - 1:
        return y[i]
    y0, y1, y2 = y[i - 1], y[i], y[i + 1]
    curvature = y0 - 2 * y1 + y2
    if curvature == 0:
        return y1
    return y1 - (y2 - y0) ** 2 / (8 * curvature)


def visibility(trace: InterferenceTrace, center: float, width: float) -> float:
    """Fringe visibility ``(max - min)/(max + min)`` inside a window.

    The window must cover at least one fringe period. Traces sampled more
    coarsely than 32 points per period are resampled with a cubic spline;
    the extrema are then refined by a three-point parabola.
    """
    period = trace.period
    if width < period:
        raise UsageError(f"window width {width:.6g} s is shorter than one fringe period {period:.6g} s")
    tau, values = trace.retardations, trace.values
    inside = (tau >= center - width / 2) & (tau <= center + width / 2)
    if inside.sum() < 3 or tau[inside][-1] - tau[inside][0] < period * (1 - 1e-9):
        raise UsageError("window does not contain one full fringe period of samples")
    x, y = tau[inside], values[inside]
    points_needed = math.ceil(MIN_POINTS_PER_PERIOD * (x[-1] - x[0]) / period) + 1
    if len(x) < points_needed:
        dense = np.linspace(x[0], x[-1], points_needed)
        y = CubicSpline(x, y)(dense)
    hi = max(_vertex(y, int(np.argmax(y))), 0.0)
    lo = max(_vertex(y, int(np.argmin(y))), 0.0)
    if hi + lo == 0:
        return 0.0
    return float(np.clip((hi - lo) / (hi + lo), 0.0, 1.0))


def dominant_frequency(trace: InterferenceTrace) -> tuple[float, float]:
    """Strongest non-DC Fourier component of a uniformly sampled trace.

    Returns ``(frequency, bin_width)`` in Hz.
    """
    step = np.diff(trace.retardations)
    if not np.allclose(step, step[0], rtol=1e-6):
        raise UsageError("dominant_frequency needs uniformly spaced retardations")
    values = trace.values - trace.values.mean()
    spectrum = np.abs(np.fft.rfft(values))
    freqs = np.fft.rfftfreq(values.size, step[0])
    k = 1 + int(np.argmax(spectrum[1:]))
    return float(freqs[k]), float(freqs[1])


@dataclass(frozen=True, eq=False)
class MzScanSpec:
    """Retardation scan ``offset + start ... offset + stop`` in steps of ``step`` [s]."""

    spectrum: SpectralAmplitude
    start: float
    stop: float
    step: float
    offset: float = DEFAULT_OFFSET

    def __post_init__(self):
        if not (self.step > 0 and self.stop > self.start):
            raise ConfigurationError("MZ scan needs step > 0 and stop > start")
        limit = (2 * math.pi / self.spectrum.grid.pump) / 8
        if self.step > limit:
            raise ConfigurationError(
                f"MZ scan step {self.step:.4g} s exceeds {limit:.4g} s (8 samples per pump period)")

    @property
    def retardations(self) -> np.ndarray:
        count = int(math.floor((self.stop - self.start) / self.step + 1e-9)) + 1
        return self.offset + self.start + self.step * np.arange(count)


def mz_scan(spec: MzScanSpec) -> tuple[InterferenceTrace, InterferenceTrace]:
    """Biphoton and single-photon traces, each normalized to its own maximum."""
    tau = spec.retardations
    carrier = spec.spectrum.grid.center
    biphoton = InterferenceTrace.normalized(tau, mz_biphoton_rate(spec.spectrum, tau), BIPHOTON, carrier)
    single = InterferenceTrace.normalized(tau, ir_interference(spec.spectrum, tau), SINGLE_PHOTON, carrier)
    return biphoton, single


def write_mz_csv(path, biphoton: InterferenceTrace, single: InterferenceTrace) -> None:
    """CSV with columns tau_s, biphoton_rate_rel, ir_intensity_rel."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["tau_s", "biphoton_rate_rel", "ir_intensity_rel"])
        for tau, r, i in zip(biphoton.retardations, biphoton.values, single.values):
            writer.writerow([f"{tau:.17g}", f"{r:.17g}", f"{i:.17g}"])


def write_visibility_json(path, windows) -> None:
    """``windows``: iterable of dicts with center_s, width_s and visibilities."""
    with open(path, "w") as fh:
        json.dump(list(windows), fh, indent=2, sort_keys=True)
        fh.write("\n")

"""Sum-frequency generation as an ultrafast coincidence detector.

Covers the flux bound, the three-term SFG rate decomposition, the regime
conditions under which SFG counts coincidences, delay scans of the
relative-time amplitude and a Poisson photon-counting model.

Bandwidths in this module are ordinary frequencies [Hz].
"""
from __future__ import annotations

import csv
import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError
from .units import C, H
from .wavefunction import TimeAmplitude


def _non_negative(value, name):
    if not math.isfinite(value) or value < 0:
        raise DomainError(f"{name} must be finite and >= 0, got {value!r}")


def max_pair_flux(delta_dc: float) -> float:
    """Largest flux [photons/s] still made of separated pairs (equal to ``delta_dc`` in Hz)."""
    _non_negative(delta_dc, "delta_dc")
    return float(delta_dc)


def spectral_photon_density(flux: float, delta_dc: float) -> float:
    """Mean spectral photon density ``n = flux / delta_dc``."""
    _non_negative(flux, "flux")
    if not math.isfinite(delta_dc) or delta_dc <= 0:
        raise DomainError(f"delta_dc must be positive, got {delta_dc!r}")
    return flux / delta_dc


def photon_energy(wavelength: float) -> float:
    if not math.isfinite(wavelength) or wavelength <= 0:
        raise DomainError(f"wavelength must be positive, got {wavelength!r}")
    return H * C / wavelength


def flux_to_power(flux: float, wavelength: float) -> float:
    """Optical power [W] of ``flux`` photons/s at ``wavelength`` [m]."""
    _non_negative(flux, "flux")
    return flux * photon_energy(wavelength)


def power_to_flux(power: float, wavelength: float) -> float:
    """Photon flux [1/s] carried by ``power`` [W] at ``wavelength`` [m]."""
    _non_negative(power, "power")
    return power / photon_energy(wavelength)


@dataclass(frozen=True)
class FluxState:
    flux: float
    density: float
    wavelength: float

    @classmethod
    def from_power(cls, power, wavelength, delta_dc):
        flux = power_to_flux(power, wavelength)
        return cls(flux, spectral_photon_density(flux, delta_dc), wavelength)

    @property
    def power(self) -> float:
        return flux_to_power(self.flux, self.wavelength)


@dataclass(frozen=True)
class RateTerms:
    coherent: float
    thermal: float
    entangled: float

    @property
    def total(self) -> float:
        return self.coherent + self.thermal + self.entangled


def sfg_rate_terms(n, delta_uc, delta_dc, weights=(1.0, 1.0, 1.0)) -> RateTerms:
    """Relative SFG rate contributions ``(delta_uc n^2, delta_dc n^2, delta_dc n)``.

    Only the linear-in-``n`` term comes from up-converted entangled pairs.
    ``weights`` scales each term separately; the default is a common constant.
    """
    for value, name in ((n, "n"), (delta_uc, "delta_uc"), (delta_dc, "delta_dc")):
        _non_negative(value, name)
    w_coh, w_th, w_ent = weights
    return RateTerms(w_coh * delta_uc * n**2, w_th * delta_dc * n**2, w_ent * delta_dc * n)


@dataclass(frozen=True)
class SfgDetectorSpec:
    """Phase-matching bandwidths of the up-conversion crystal [Hz].

    ``delta_lf``: input (low-frequency) acceptance, ``delta_uc``: up-converted
    acceptance, ``bandwidth``: bandwidth of the incoming light, ``delta_dc``:
    down-conversion bandwidth, ``delta_p``: pump bandwidth.
    """

    delta_lf: float
    delta_uc: float
    bandwidth: float
    delta_dc: float
    delta_p: float

    def __post_init__(self):
        for name in ("delta_lf", "delta_uc", "bandwidth", "delta_dc", "delta_p"):
            _non_negative(getattr(self, name), name)

    @classmethod
    def matched(cls, delta_dc, delta_uc, delta_p):
        """Identical down- and up-conversion crystals: input acceptance equals the light bandwidth."""
        return cls(delta_dc, delta_uc, delta_dc, delta_dc, delta_p)


class Regime(enum.IntEnum):
    """Ordered so that a larger value is a stronger coincidence guarantee."""

    NOT_COINCIDENCE = 0
    ENTANGLED_PAIR_COINCIDENCE = 1
    UNIVERSAL_COINCIDENCE = 2


@dataclass(frozen=True)
class RegimeReport:
    verdict: Regime
    conditions: dict = field(default_factory=dict)

    def as_dict(self):
        return {"verdict": self.verdict.name, "conditions": dict(self.conditions)}


def coincidence_regime(spec: SfgDetectorSpec, n: float) -> RegimeReport:
    """Decide whether SFG acts as a coincidence detector.

    Universal when the whole input bandwidth is phase matched both at the
    input and the up-converted frequency; for entangled pairs below the
    maximal flux the up-converted condition relaxes to exceeding the pump
    bandwidth. Inequalities are strict where the conditions are strict.
    """
    _non_negative(n, "n")
    conditions = {
        "input_acceptance (delta_lf >= bandwidth)": spec.delta_lf >= spec.bandwidth,
        "upconverted_acceptance (delta_uc > 2*bandwidth)": spec.delta_uc > 2 * spec.bandwidth,
        "pump_narrower (delta_uc > delta_p)": spec.delta_uc > spec.delta_p,
        "below_max_flux (n < 1)": n < 1,
    }
    lf, uc, pump, low = conditions.values()
    if lf and uc:
        verdict = Regime.UNIVERSAL_COINCIDENCE
    elif lf and pump and low:
        verdict = Regime.ENTANGLED_PAIR_COINCIDENCE
    else:
        verdict = Regime.NOT_COINCIDENCE
    return RegimeReport(verdict, conditions)


def delay_scan(G: TimeAmplitude, delays) -> np.ndarray:
    """Normalized SFG rate ``|G(tau)|^2 / max|G|^2`` at each delay.

    ``G`` is interpolated linearly between samples, so the result never
    exceeds 1 and equals 1 at the sampled peak.
    """
    values = np.abs(G.at(delays)) ** 2 / G.peak**2
    return np.clip(values, 0.0, 1.0)


@dataclass(frozen=True)
class CountModel:
    """Photon-counting parameters.

    ``peak_rate`` maps a relative rate of 1 to counts/s; it is the single
    calibration constant of the otherwise proportional rate model.
    """

    peak_rate: float = 100.0
    dark_rate: float = 50.0
    integration_time: float = 10.0
    seed: int = 0

    def __post_init__(self):
        _non_negative(self.peak_rate, "peak_rate")
        _non_negative(self.dark_rate, "dark_rate")
        if not math.isfinite(self.integration_time) or self.integration_time <= 0:
            raise DomainError(f"integration_time must be positive, got {self.integration_time!r}")
        if int(self.seed) != self.seed or self.seed < 0:
            raise DomainError(f"seed must be a non-negative integer, got {self.seed!r}")


@dataclass(frozen=True, eq=False)
class CountResult:
    raw: np.ndarray
    subtracted: np.ndarray
    rate: np.ndarray


def simulate_counts(rates, model: CountModel) -> CountResult:
    """Poisson counts for signal ``rates`` [1/s] plus the dark rate.

    ``subtracted`` holds ``raw - dark * T`` (counts); ``rate`` the
    dark-subtracted rate estimate ``subtracted / T``. A fresh generator is
    seeded from ``model.seed`` on every call.
    """
    rates = np.asarray(rates, dtype=float)
    if np.any(~np.isfinite(rates)) or np.any(rates < 0):
        raise DomainError("count rates must be finite and non-negative")
    rng = np.random.default_rng(int(model.seed))
    t = model.integration_time
    raw = rng.poisson((rates + model.dark_rate) * t)
    subtracted = raw - model.dark_rate * t
    return CountResult(raw, subtracted, subtracted / t)


def write_scan_csv(path, delays, rates_rel, counts: CountResult) -> None:
    """CSV with columns delay_s, rate_rel, counts_raw, counts_dark_subtracted."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["delay_s", "rate_rel", "counts_raw", "counts_dark_subtracted"])
        for tau, r, raw, sub in zip(delays, rates_rel, counts.raw, counts.subtracted):
            writer.writerow([f"{tau:.17g}", f"{r:.17g}", int(raw), f"{sub:.17g}"])


def read_scan_csv(path):
    """Inverse of :func:`write_scan_csv`, returning a dict of column arrays."""
    with open(path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    return {key: np.array([float(row[key]) for row in rows]) for key in rows[0]} if rows else {}

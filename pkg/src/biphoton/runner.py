"""Assemble the optical chain from a configuration and run named experiments."""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import interference as mz
from . import sfg
from .config import ConstraintError, ExperimentConfig
from .errors import ConfigurationError
from .spectra import (
    PairFilter, PhaseMask, SpectralAmplitude, compose_pair_filter, flattop_spectrum,
    gaussian_spectrum, load_mask, mask_opposite_linear, mask_pi_step, sinc_phasematch_spectrum,
    slm_quantize, zero_mask,
)
from .units import (
    FrequencyGrid, angular_frequency_to_wavelength, make_frequency_grid,
    wavelength_to_angular_frequency,
)
from .wavefunction import (
    TimeAmplitude, correlation_fwhm, is_multimodal, lobe_widths, oracle_dft,
    relative_wavefunction, save_time_amplitude,
)

COMMANDS = ("wavefunction", "delay-scan", "pi-step", "mz-scan", "regime", "info")


@dataclass
class Chain:
    grid: FrequencyGrid
    spectrum: SpectralAmplitude
    mask: PhaseMask
    pair_filter: PairFilter


@dataclass
class RunResult:
    command: str
    summary: dict
    files: list = field(default_factory=list)


def _grid(cfg: ExperimentConfig) -> FrequencyGrid:
    center = wavelength_to_angular_frequency(cfg.spectrum.center_wavelength)
    span = cfg.grid.span_factor * cfg.spectrum_bandwidth_rad
    try:
        return make_frequency_grid(center, span, cfg.grid.points)
    except ConfigurationError as exc:
        raise ConstraintError("grid.span_factor", str(exc)) from exc


def _spectrum(cfg, grid) -> SpectralAmplitude:
    width = cfg.spectrum_bandwidth_rad
    try:
        if cfg.spectrum.model == "gaussian":
            return gaussian_spectrum(grid, width)
        if cfg.spectrum.model == "sinc":
            return sinc_phasematch_spectrum(grid, width)
        return flattop_spectrum(grid, width / 2)
    except ConfigurationError as exc:
        raise ConstraintError("spectrum.bandwidth", str(exc)) from exc


def pi_step_frequency(cfg: ExperimentConfig) -> float:
    """Step position: configured wavelength, else the middle of the upper half-band."""
    if cfg.mask.step_wavelength is not None:
        return wavelength_to_angular_frequency(cfg.mask.step_wavelength)
    return wavelength_to_angular_frequency(cfg.spectrum.center_wavelength) + cfg.spectrum_bandwidth_rad / 4


def _quantize(cfg, mask):
    if cfg.mask.slm_pixels is None:
        return mask
    try:
        return slm_quantize(mask, cfg.mask.slm_pixels, cfg.mask.slm_levels)
    except ConfigurationError as exc:
        raise ConstraintError("mask.slm_pixels", str(exc)) from exc


def _mask(cfg, grid, kind=None, delay=None) -> PhaseMask:
    kind = kind or cfg.mask.kind
    try:
        if kind == "none":
            mask = zero_mask(grid)
        elif kind == "opposite_linear":
            mask = mask_opposite_linear(grid, cfg.mask.delay if delay is None else delay)
        elif kind == "pi_step":
            mask = mask_pi_step(grid, pi_step_frequency(cfg))
        else:
            mask = load_mask(cfg.mask.path, grid)
    except ConfigurationError as exc:
        raise ConstraintError(f"mask.{'path' if kind == 'file' else kind}", str(exc)) from exc
    return _quantize(cfg, mask)


def build_chain(cfg: ExperimentConfig, validate_only=False, kind=None, delay=None) -> Chain:
    grid = _grid(cfg)
    spectrum = _spectrum(cfg, grid)
    if validate_only:
        # masks are checked here only when they need no file access
        if cfg.mask.kind not in ("file",):
            _mask(cfg, grid)
        _mask(cfg, grid, kind="pi_step")
        for i, t in enumerate(cfg.scan.mask_delays):
            try:
                mask_opposite_linear(grid, t)
            except ConfigurationError as exc:
                raise ConstraintError(f"scan.mask_delays[{i}]", str(exc)) from exc
        tg_half = math.pi / grid.spacing
        for name in ("start", "stop"):
            if abs(getattr(cfg.scan, name)) >= tg_half:
                raise ConstraintError(f"scan.{name}", f"outside the time window +-{tg_half:.4g} s")
        try:
            mz.MzScanSpec(spectrum, cfg.mz.start, cfg.mz.stop, cfg.mz.step, cfg.mz.offset)
        except ConfigurationError as exc:
            raise ConstraintError("mz.step", str(exc)) from exc
        return None
    mask = _mask(cfg, grid, kind, delay)
    return Chain(grid, spectrum, mask, compose_pair_filter(mask))


# -- commands ------------------------------------------------------------------

def _flux_block(cfg):
    delta_dc = cfg.delta_dc_hz
    wavelength = cfg.spectrum.center_wavelength
    phi_max = sfg.max_pair_flux(delta_dc)
    state = sfg.FluxState.from_power(cfg.flux.power, wavelength, delta_dc)
    terms = sfg.sfg_rate_terms(state.density, cfg.delta_uc_hz, delta_dc)
    return phi_max, state, terms


def _detector(cfg):
    return sfg.SfgDetectorSpec(cfg.delta_lf_hz, cfg.delta_uc_hz, cfg.delta_dc_hz, cfg.delta_dc_hz,
                               cfg.delta_p_hz)


def _regime(cfg, out):
    _, state, _ = _flux_block(cfg)
    spec = _detector(cfg)
    report = sfg.coincidence_regime(spec, state.density)
    summary = {
        "n": state.density,
        "detector_hz": {"delta_lf": spec.delta_lf, "delta_uc": spec.delta_uc,
                        "bandwidth": spec.bandwidth, "delta_dc": spec.delta_dc, "delta_p": spec.delta_p},
        **report.as_dict(),
    }
    return summary, []


def _info(cfg, out):
    phi_max, state, terms = _flux_block(cfg)
    wavelength = cfg.spectrum.center_wavelength
    regime, _ = _regime(cfg, out)
    summary = {
        "center_wavelength_m": wavelength,
        "pump_wavelength_m": wavelength / 2,
        "delta_dc_hz": cfg.delta_dc_hz,
        "delta_uc_hz": cfg.delta_uc_hz,
        "delta_p_hz": cfg.delta_p_hz,
        "max_pair_flux_per_s": phi_max,
        "max_pair_flux_power_w": sfg.flux_to_power(phi_max, wavelength),
        "flux_per_s": state.flux,
        "power_w": cfg.flux.power,
        "spectral_photon_density": state.density,
        "rate_terms": {"coherent": terms.coherent, "thermal": terms.thermal, "entangled": terms.entangled},
        "entangled_over_thermal": terms.entangled / terms.thermal if terms.thermal else None,
        "regime": regime["verdict"],
        "conditions": regime["conditions"],
    }
    return summary, []


def _shape_summary(G: TimeAmplitude):
    if is_multimodal(G):
        return {"multimodal": True, "lobe_widths_s": lobe_widths(G)}
    return {"multimodal": False, "fwhm_s": correlation_fwhm(G)}


def _wavefunction(cfg, out):
    chain = build_chain(cfg)
    G = relative_wavefunction(chain.spectrum, chain.pair_filter)
    path = out / "wavefunction.csv"
    save_time_amplitude(G, path)
    oracle = oracle_dft(chain.spectrum, chain.pair_filter, G.times)
    shaped = chain.spectrum.values * chain.pair_filter.values
    spectral_energy = np.sum(np.abs(shaped) ** 2) * chain.grid.spacing / (2 * math.pi)
    summary = {
        "mask": cfg.mask.kind,
        "carrier_rad_per_s": G.carrier,
        "time_step_s": G.time_grid.spacing,
        "peak_abs_G": G.peak,
        "peak_time_s": G.peak_time(),
        "parseval_rel_error": abs(G.energy() - spectral_energy) / spectral_energy,
        "oracle_max_rel_error": float(np.abs(oracle - G.values).max() / G.peak),
        **_shape_summary(G),
    }
    return summary, [path]


def _scan_delays(cfg):
    count = int(math.floor((cfg.scan.stop - cfg.scan.start) / cfg.scan.step + 1e-9)) + 1
    return cfg.scan.start + cfg.scan.step * np.arange(count)


def _write_scan(cfg, G, path, seed):
    delays = _scan_delays(cfg)
    rates = sfg.delay_scan(G, delays)
    c = cfg.counts
    model = sfg.CountModel(c.peak_rate, c.dark_rate, c.integration_time, seed)
    counts = sfg.simulate_counts(rates * c.peak_rate, model)
    sfg.write_scan_csv(path, delays, rates, counts)
    return delays, rates


def _delay_scan(cfg, out):
    sweep = cfg.scan.mask_delays or (None,)
    entries, files = [], []
    for i, delay in enumerate(sweep):
        if delay is None:
            chain, label = build_chain(cfg), "delay_scan.csv"
        else:
            chain = build_chain(cfg, kind="opposite_linear", delay=delay)
            label = f"delay_scan_{i:02d}.csv"
        G = relative_wavefunction(chain.spectrum, chain.pair_filter)
        path = out / label
        delays, rates = _write_scan(cfg, G, path, cfg.counts.seed + i)
        files.append(path)
        entries.append({
            "file": label,
            "mask_delay_s": delay,
            "argmax_delay_s": float(delays[np.argmax(rates)]),
            **_shape_summary(G),
        })
    return {"scan_step_s": cfg.scan.step, "scans": entries}, files


def _local_maxima(delays, rates, floor=0.5):
    idx = [i for i in range(1, len(rates) - 1)
           if rates[i] >= rates[i - 1] and rates[i] > rates[i + 1] and rates[i] >= floor]
    return [{"delay_s": float(delays[i]), "rate_rel": float(rates[i])} for i in idx]


def _pi_step(cfg, out):
    chain = build_chain(cfg, kind="pi_step")
    G = relative_wavefunction(chain.spectrum, chain.pair_filter)
    path = out / "pi_step.csv"
    delays, rates = _write_scan(cfg, G, path, cfg.counts.seed)
    step = pi_step_frequency(cfg)
    summary = {
        "step_rad_per_s": step,
        "step_wavelength_m": angular_frequency_to_wavelength(step),
        "rate_at_zero_delay": float(sfg.delay_scan(G, 0.0)),
        "lobes": _local_maxima(delays, rates),
        **_shape_summary(G),
    }
    return summary, [path]


def _mz_scan(cfg, out):
    chain = build_chain(cfg, kind="none")
    spec = mz.MzScanSpec(chain.spectrum, cfg.mz.start, cfg.mz.stop, cfg.mz.step, cfg.mz.offset)
    biphoton, single = mz.mz_scan(spec)
    path = out / "mz_scan.csv"
    mz.write_mz_csv(path, biphoton, single)
    center, width = cfg.mz.visibility_center, cfg.mz.visibility_width
    window = {
        "center_s": center,
        "width_s": width,
        "biphoton_visibility": mz.visibility(biphoton, center, width),
        "single_photon_visibility": mz.visibility(single, center, width),
        "classical_limit": 0.5,
    }
    vis_path = out / "mz_visibility.json"
    mz.write_visibility_json(vis_path, [window])
    summary = {"offset_s": cfg.mz.offset, "points": int(biphoton.retardations.size), "window": window}
    return summary, [path, vis_path]


_HANDLERS = {
    "wavefunction": _wavefunction,
    "delay-scan": _delay_scan,
    "pi-step": _pi_step,
    "mz-scan": _mz_scan,
    "regime": _regime,
    "info": _info,
}


def run_experiment(cfg: ExperimentConfig, command: str, out_dir=None) -> RunResult:
    """Run ``command`` and write its CSV/JSON outputs under the output directory.

    Outputs depend only on the configuration and the command.
    """
    if command not in _HANDLERS:
        raise ValueError(f"unknown command {command!r}; choose from {', '.join(COMMANDS)}")
    out = Path(out_dir if out_dir is not None else cfg.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    summary, files = _HANDLERS[command](cfg, out)
    summary = {"command": command, **summary}
    summary_path = out / f"{command.replace('-', '_')}.json"
    with open(summary_path, "w") as fh:
        json.dump(summary, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return RunResult(command, summary, [*files, summary_path])

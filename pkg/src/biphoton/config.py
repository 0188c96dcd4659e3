"""Experiment configuration: YAML document <-> validated dataclasses.

Quantities may be written with units (``31 nm``, ``5 MHz``, ``300 fs``,
``0.25 uW``) or as bare numbers in SI base units. Omitted fields take the
default profile: 31 nm of down-conversion bandwidth at 1064 nm, a 5 MHz pump,
0.1 nm up-conversion acceptance, 163 um of calcite retardation, 50 counts/s
dark rate and 10 s integration.
"""
from __future__ import annotations

import dataclasses
import math
import os
import re
from decimal import Decimal
from dataclasses import dataclass, field, fields
from typing import Optional

import yaml

from .errors import BiphotonError
from .units import C, bandwidth_nm_to_hz

OUTPUT_DIR_ENV = "BIPHOTON_OUTPUT_DIR"


class ConfigError(BiphotonError):
    """Base class for configuration problems (CLI exit status 2)."""


class ConfigSyntaxError(ConfigError):
    """The document is not well-formed YAML or not a mapping."""


class UnknownKeyError(ConfigError):
    """The document contains a key this schema does not define."""


class ConstraintError(ConfigError):
    """A field has a value that violates its constraint."""

    def __init__(self, field_name, message):
        super().__init__(f"{field_name}: {message}")
        self.field = field_name


_UNITS = {
    "length": {"m": 1.0, "mm": 1e-3, "um": 1e-6, "µm": 1e-6, "nm": 1e-9, "pm": 1e-12},
    "frequency": {"Hz": 1.0, "kHz": 1e3, "MHz": 1e6, "GHz": 1e9, "THz": 1e12},
    "time": {"s": 1.0, "ms": 1e-3, "us": 1e-6, "µs": 1e-6, "ns": 1e-9, "ps": 1e-12, "fs": 1e-15},
    "power": {"W": 1.0, "mW": 1e-3, "uW": 1e-6, "µW": 1e-6, "nW": 1e-9, "pW": 1e-12},
    "rate": {"1/s": 1.0, "/s": 1.0, "s^-1": 1.0, "Hz": 1.0},
}
_QUANTITY = re.compile(r"^\s*([-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?)\s*(\S*)\s*$")


def parse_quantity(value, dimensions, field_name):
    """Return ``(si_value, dimension)`` for a number or ``"<number> <unit>"`` string.

    ``dimensions`` lists the accepted dimensions; a bare number is read in
    SI units of the first one.
    """
    if isinstance(value, bool):
        raise ConstraintError(field_name, f"expected a quantity, got {value!r}")
    if isinstance(value, (int, float)):
        return float(value), dimensions[0]
    if not isinstance(value, str):
        raise ConstraintError(field_name, f"expected a quantity, got {value!r}")
    match = _QUANTITY.match(value)
    if not match:
        raise ConstraintError(field_name, f"cannot parse quantity {value!r}")
    number, unit = match.group(1), match.group(2)
    if not unit:
        return float(number), dimensions[0]
    for dim in dimensions:
        if unit in _UNITS[dim]:
            # exact decimal product, so "300 fs" reads as the float nearest 3e-13
            return float(Decimal(number) * Decimal(repr(_UNITS[dim][unit]))), dim
    accepted = sorted({u for dim in dimensions for u in _UNITS[dim]})
    raise ConstraintError(field_name, f"unit {unit!r} not accepted (use one of {', '.join(accepted)})")


@dataclass(frozen=True)
class Bandwidth:
    """A bandwidth given either as a wavelength width [m] or a frequency width [Hz]."""

    value: float
    unit: str  # "m" or "Hz"

    def to_hz(self, center_wavelength: float) -> float:
        if self.unit == "Hz":
            return self.value
        return bandwidth_nm_to_hz(self.value, center_wavelength)

    def dump(self) -> str:
        return f"{self.value!r} {self.unit}"


@dataclass(frozen=True)
class SpectrumConfig:
    model: str = "gaussian"
    bandwidth: Bandwidth = Bandwidth(31e-9, "m")
    center_wavelength: float = 1064e-9


@dataclass(frozen=True)
class PumpConfig:
    bandwidth: float = 5e6  # Hz, FWHM


@dataclass(frozen=True)
class GridConfig:
    span_factor: float = 64.0  # time step ~1.9 fs; larger spans reach zero frequency
    points: int = 4096


@dataclass(frozen=True)
class MaskConfig:
    kind: str = "none"
    delay: float = 0.0
    step_wavelength: Optional[float] = None
    path: Optional[str] = None
    slm_pixels: Optional[int] = None
    slm_levels: Optional[int] = None


@dataclass(frozen=True)
class DetectorConfig:
    delta_lf: Optional[Bandwidth] = None
    delta_uc: Bandwidth = Bandwidth(0.1e-9, "m")
    delta_dc: Optional[Bandwidth] = None
    delta_p: Optional[float] = None


@dataclass(frozen=True)
class FluxConfig:
    power: float = 0.25e-6


@dataclass(frozen=True)
class ScanConfig:
    start: float = -400e-15
    stop: float = 400e-15
    step: float = 1e-15
    mask_delays: tuple = (-300e-15, -150e-15, 0.0, 150e-15, 300e-15)


@dataclass(frozen=True)
class MzConfig:
    offset: float = 163e-6 / C
    start: float = -20e-15
    stop: float = 20e-15
    step: float = 0.05e-15
    visibility_center: float = 550e-15
    visibility_width: float = 4e-15


@dataclass(frozen=True)
class CountsConfig:
    peak_rate: float = 100.0
    dark_rate: float = 50.0
    integration_time: float = 10.0
    seed: int = 0


def _default_output_dir():
    return os.environ.get(OUTPUT_DIR_ENV, "results")


@dataclass(frozen=True)
class ExperimentConfig:
    spectrum: SpectrumConfig = SpectrumConfig()
    pump: PumpConfig = PumpConfig()
    grid: GridConfig = GridConfig()
    mask: MaskConfig = MaskConfig()
    detector: DetectorConfig = DetectorConfig()
    flux: FluxConfig = FluxConfig()
    scan: ScanConfig = ScanConfig()
    mz: MzConfig = MzConfig()
    counts: CountsConfig = CountsConfig()
    output_dir: str = field(default_factory=_default_output_dir)

    # -- derived quantities used by the runner ---------------------------------

    @property
    def delta_dc_hz(self) -> float:
        bw = self.detector.delta_dc or self.spectrum.bandwidth
        return bw.to_hz(self.spectrum.center_wavelength)

    @property
    def spectrum_bandwidth_rad(self) -> float:
        return 2 * math.pi * self.spectrum.bandwidth.to_hz(self.spectrum.center_wavelength)

    @property
    def delta_uc_hz(self) -> float:
        # quoted at the up-converted (half) wavelength
        return self.detector.delta_uc.to_hz(self.spectrum.center_wavelength / 2)

    @property
    def delta_lf_hz(self) -> float:
        if self.detector.delta_lf is None:
            return self.delta_dc_hz
        return self.detector.delta_lf.to_hz(self.spectrum.center_wavelength)

    @property
    def delta_p_hz(self) -> float:
        return self.pump.bandwidth if self.detector.delta_p is None else self.detector.delta_p


# -- field schema ----------------------------------------------------------------

def _positive(x):
    return x > 0


def _non_negative(x):
    return x >= 0


# section -> field -> (kind, constraint, description)
# kinds: "bandwidth", a dimension list, "int", "str:<choices>", "path", "delays"
_SCHEMA = {
    "spectrum": {
        "model": ("str:gaussian,sinc,flattop", None, ""),
        "bandwidth": ("bandwidth", _positive, "must be > 0"),
        "center_wavelength": (["length"], _positive, "must be > 0"),
    },
    "pump": {"bandwidth": (["frequency"], _non_negative, "must be >= 0")},
    "grid": {
        "span_factor": (["number"], lambda x: x > 2, "must be > 2 (spectral width < span/2)"),
        "points": ("int", lambda n: n >= 8 and n % 2 == 0, "must be an even integer >= 8"),
    },
    "mask": {
        "kind": ("str:none,opposite_linear,pi_step,file", None, ""),
        "delay": (["time"], None, ""),
        "step_wavelength": (["length"], _positive, "must be > 0"),
        "path": ("path", None, ""),
        "slm_pixels": ("int", lambda n: n >= 1, "must be >= 1"),
        "slm_levels": ("int", lambda n: n >= 2, "must be >= 2"),
    },
    "detector": {
        "delta_lf": ("bandwidth", _non_negative, "must be >= 0"),
        "delta_uc": ("bandwidth", _non_negative, "must be >= 0"),
        "delta_dc": ("bandwidth", _positive, "must be > 0"),
        "delta_p": (["frequency"], _non_negative, "must be >= 0"),
    },
    "flux": {"power": (["power"], _non_negative, "must be >= 0")},
    "scan": {
        "start": (["time"], None, ""),
        "stop": (["time"], None, ""),
        "step": (["time"], _positive, "must be > 0"),
        "mask_delays": ("delays", None, ""),
    },
    "mz": {
        "offset": (["time", "length"], None, ""),
        "start": (["time"], None, ""),
        "stop": (["time"], None, ""),
        "step": (["time"], _positive, "must be > 0"),
        "visibility_center": (["time"], None, ""),
        "visibility_width": (["time"], _positive, "must be > 0"),
    },
    "counts": {
        "peak_rate": (["rate"], _non_negative, "must be >= 0"),
        "dark_rate": (["rate"], _non_negative, "must be >= 0"),
        "integration_time": (["time"], _positive, "must be > 0"),
        "seed": ("int", _non_negative, "must be >= 0"),
    },
}
_SECTIONS = {
    "spectrum": SpectrumConfig, "pump": PumpConfig, "grid": GridConfig, "mask": MaskConfig,
    "detector": DetectorConfig, "flux": FluxConfig, "scan": ScanConfig, "mz": MzConfig,
    "counts": CountsConfig,
}


def _convert(kind, raw, name):
    if raw is None:
        return None
    if kind == "bandwidth":
        value, dim = parse_quantity(raw, ["length", "frequency"], name)
        return Bandwidth(value, "m" if dim == "length" else "Hz")
    if kind == "int":
        if isinstance(raw, bool) or not isinstance(raw, int):
            raise ConstraintError(name, f"expected an integer, got {raw!r}")
        return raw
    if kind == "path":
        if not isinstance(raw, str):
            raise ConstraintError(name, f"expected a path string, got {raw!r}")
        return raw
    if isinstance(kind, str) and kind.startswith("str:"):
        choices = kind[4:].split(",")
        if raw not in choices:
            raise ConstraintError(name, f"must be one of {', '.join(choices)}, got {raw!r}")
        return raw
    if kind == "delays":
        if not isinstance(raw, list):
            raise ConstraintError(name, "expected a list of times")
        return tuple(_convert(["time"], item, f"{name}[{i}]") for i, item in enumerate(raw))
    if kind == ["number"]:
        if isinstance(raw, bool) or not isinstance(raw, (int, float)):
            raise ConstraintError(name, f"expected a number, got {raw!r}")
        return float(raw)
    value, dim = parse_quantity(raw, kind, name)
    if dim == "length" and "time" in kind:
        value /= C  # optical path difference -> retardation time
    return value


def _check(name, value, constraint, message):
    if value is None or constraint is None:
        return
    number = value.value if isinstance(value, Bandwidth) else value
    if isinstance(number, float) and not math.isfinite(number):
        raise ConstraintError(name, "must be finite")
    if not constraint(number):
        raise ConstraintError(name, message)


def _cross_validate(cfg: ExperimentConfig):
    from .runner import build_chain  # local import: runner depends on this module

    if cfg.scan.stop <= cfg.scan.start:
        raise ConstraintError("scan.stop", "must be greater than scan.start")
    if cfg.mz.stop <= cfg.mz.start:
        raise ConstraintError("mz.stop", "must be greater than mz.start")
    if cfg.mask.kind == "file" and not cfg.mask.path:
        raise ConstraintError("mask.path", "required when mask.kind is 'file'")
    if (cfg.mask.slm_pixels is None) != (cfg.mask.slm_levels is None):
        raise ConstraintError("mask.slm_levels", "slm_pixels and slm_levels must be given together")
    build_chain(cfg, validate_only=True)


def config_from_dict(doc) -> ExperimentConfig:
    """Validate a parsed mapping and apply defaults."""
    if doc is None:
        doc = {}
    if not isinstance(doc, dict):
        raise ConfigSyntaxError("configuration document must be a mapping")
    kwargs = {}
    for section, body in doc.items():
        if section == "output_dir":
            if not isinstance(body, str):
                raise ConstraintError("output_dir", "expected a path string")
            kwargs["output_dir"] = body
            continue
        if section not in _SCHEMA:
            raise UnknownKeyError(f"unknown key {section!r}")
        if body is None:
            continue
        if not isinstance(body, dict):
            raise ConfigSyntaxError(f"section {section!r} must be a mapping")
        values = {}
        for key, raw in body.items():
            name = f"{section}.{key}"
            if key not in _SCHEMA[section]:
                raise UnknownKeyError(f"unknown key {name!r}")
            kind, constraint, message = _SCHEMA[section][key]
            value = _convert(kind, raw, name)
            _check(name, value, constraint, message)
            if value is not None or key in _NULLABLE.get(section, ()):
                values[key] = value
        kwargs[section] = _SECTIONS[section](**values)
    cfg = ExperimentConfig(**kwargs)
    _cross_validate(cfg)
    return cfg


_NULLABLE = {
    "mask": ("step_wavelength", "path", "slm_pixels", "slm_levels"),
    "detector": ("delta_lf", "delta_dc", "delta_p"),
}


def parse_config(text: str) -> ExperimentConfig:
    """Parse a YAML configuration document (an empty document gives the defaults)."""
    try:
        doc = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        reason = str(exc).replace("\n", " ")
        raise ConfigSyntaxError(f"malformed document: {reason}") from exc
    return config_from_dict(doc)


def load_config(path) -> ExperimentConfig:
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigSyntaxError(f"cannot read {path}: {exc.strerror}") from exc
    return parse_config(text)


def _dump_value(value):
    if isinstance(value, Bandwidth):
        return value.dump()
    if isinstance(value, tuple):
        return [_dump_value(v) for v in value]
    return value


def config_to_dict(cfg: ExperimentConfig) -> dict:
    out = {}
    for f in fields(cfg):
        value = getattr(cfg, f.name)
        if dataclasses.is_dataclass(value):
            out[f.name] = {sf.name: _dump_value(getattr(value, sf.name)) for sf in fields(value)}
        else:
            out[f.name] = value
    return out


def serialize_config(cfg: ExperimentConfig) -> str:
    """YAML text that parses back to an equal configuration."""
    return yaml.safe_dump(config_to_dict(cfg), sort_keys=False)

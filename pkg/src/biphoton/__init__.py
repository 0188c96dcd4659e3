"""Spectral-phase shaping of entangled photon pairs and SFG coincidence detection."""
from .errors import (
    BiphotonError, CalibrationError, ConfigurationError, DomainError, MultimodalError,
    RangeError, UsageError,
)
from .interference import (
    InterferenceTrace, MzScanSpec, ir_interference, mz_biphoton_rate, mz_scan, visibility,
)
from .sfg import (
    CountModel, FluxState, Regime, SfgDetectorSpec, coincidence_regime, delay_scan, flux_to_power,
    max_pair_flux, power_to_flux, sfg_rate_terms, simulate_counts, spectral_photon_density,
)
from .spectra import (
    PairFilter, PhaseMask, SpectralAmplitude, compose_pair_filter, flattop_spectrum,
    gaussian_spectrum, mask_opposite_linear, mask_pi_step, sinc_phasematch_spectrum, slm_quantize,
)
from .units import (
    FrequencyGrid, TimeGrid, angular_frequency_to_wavelength, bandwidth_nm_to_hz,
    conjugate_time_grid, make_frequency_grid, wavelength_to_angular_frequency,
)
from .wavefunction import (
    TimeAmplitude, TwoPhotonWavefunction, correlation_fwhm, oracle_dft, relative_wavefunction,
    two_photon_density,
)

__version__ = "0.1.0"

import math

import pytest

from biphoton.spectra import gaussian_spectrum
from biphoton.units import make_frequency_grid, wavelength_to_angular_frequency

# 8.2 THz intensity FWHM around 1064 nm, the default down-conversion profile
DC_FWHM_HZ = 8.2e12
DC_FWHM = 2 * math.pi * DC_FWHM_HZ
OMEGA0 = wavelength_to_angular_frequency(1064e-9)

ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def grid():
    return make_frequency_grid(OMEGA0, 32 * DC_FWHM, 4096)


@pytest.fixture(scope="session")
def gaussian(grid):
    return gaussian_spectrum(grid, DC_FWHM)


@pytest.fixture
def record_criterion():
    def record(number, description, passed, detail=""):
        status = "PASS" if passed else "FAIL"
        ACCEPTANCE_LINES.append(f"[{status}] criterion {number:>2}: {description} ({detail})")
        return passed
    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)

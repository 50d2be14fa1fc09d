"""Unit system and physical constants.

All energies are in micro-electronvolts (ueV), times in picoseconds (ps)
and electric fields in kV/cm.  Every energy/time conversion in the package
goes through the reduced Planck constant below.
"""

import math

# hbar = 6.582119569e-16 eV s = 658.2119569 ueV ps
HBAR_UEV_PS = 658.2119569

# FWHM of a Gaussian = 2 sqrt(2 ln 2) sigma
GAUSSIAN_FWHM_PER_SIGMA = 2.0 * math.sqrt(2.0 * math.log(2.0))


def fwhm_to_sigma(fwhm: float) -> float:
    """Gaussian FWHM -> standard deviation."""
    return fwhm / GAUSSIAN_FWHM_PER_SIGMA


def sigma_to_fwhm(sigma: float) -> float:
    """Gaussian standard deviation -> FWHM."""
    return sigma * GAUSSIAN_FWHM_PER_SIGMA

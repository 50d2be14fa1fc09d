"""Spectral lineshapes and their time-domain counterparts.

Evaluates Lorentzian, Gaussian and Voigt profiles on photon-energy grids
(ueV) and converts spectral widths to the coherence quantities used by the
correlation model:

* a Lorentzian line of FWHM ``G`` corresponds to an exponential
  first-order coherence decay with ``tau_c = 2 hbar / G``,
* a Gaussian line of FWHM ``f`` corresponds to a static energy jitter of
  standard deviation ``f / (2 sqrt(2 ln 2))``.

The Voigt profile is evaluated through the Faddeeva function ``w(z)``:

    V(x; sigma, gamma) ~ Re[w((x + i gamma) / (sigma sqrt(2)))]

normalised here so that the peak value equals ``amplitude``.
"""

from __future__ import annotations

import csv
import enum
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.special import wofz

from .constants import GAUSSIAN_FWHM_PER_SIGMA, HBAR_UEV_PS
from .validation import as_float_array, check_finite, check_uniform_grid

__all__ = [
    "LineshapeKind",
    "LineshapeParams",
    "Spectrum",
    "evaluate",
    "lorentzian",
    "gaussian",
    "voigt",
    "voigt_fwhm_estimate",
    "coherence_time_from_lorentzian",
    "lorentzian_fwhm_from_coherence_time",
    "jitter_sigma_from_gaussian",
    "gaussian_fwhm_from_jitter_sigma",
    "read_spectrum_csv",
    "write_spectrum_csv",
]

SPECTRUM_CSV_HEADER = ("energy_ueV", "intensity")


class LineshapeKind(str, enum.Enum):
    LORENTZIAN = "lorentzian"
    GAUSSIAN = "gaussian"
    VOIGT = "voigt"


@dataclass(frozen=True)
class LineshapeParams:
    """Parameters of one spectral line.

    Widths are FWHM in ueV.  ``offset`` is an additive constant floor
    (dark counts); the profile peak sits at ``amplitude + offset``.
    """

    kind: LineshapeKind
    center_ueV: float
    lorentzian_fwhm_ueV: float = 0.0
    gaussian_fwhm_ueV: float = 0.0
    amplitude: float = 1.0
    offset: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "kind", LineshapeKind(self.kind))
        for name in ("center_ueV", "lorentzian_fwhm_ueV", "gaussian_fwhm_ueV",
                     "amplitude", "offset"):
            if not np.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")
        if self.lorentzian_fwhm_ueV < 0 or self.gaussian_fwhm_ueV < 0:
            raise ValueError("linewidths must be non-negative")
        if self.amplitude <= 0:
            raise ValueError("amplitude must be positive")
        if self.offset < 0:
            raise ValueError("offset must be non-negative")
        if self.kind is LineshapeKind.LORENTZIAN and self.gaussian_fwhm_ueV != 0:
            raise ValueError("Lorentzian line must have gaussian_fwhm_ueV = 0")
        if self.kind is LineshapeKind.GAUSSIAN and self.lorentzian_fwhm_ueV != 0:
            raise ValueError("Gaussian line must have lorentzian_fwhm_ueV = 0")
        if self.kind is LineshapeKind.VOIGT and (
            self.lorentzian_fwhm_ueV <= 0 or self.gaussian_fwhm_ueV <= 0
        ):
            raise ValueError("Voigt line needs both widths > 0")


@dataclass(frozen=True)
class Spectrum:
    """Measured or synthetic intensity spectrum on a uniform energy grid."""

    energies_ueV: np.ndarray
    intensities: np.ndarray

    def __post_init__(self):
        e = as_float_array(self.energies_ueV, "energies_ueV")
        y = as_float_array(self.intensities, "intensities")
        check_finite(e, "energies_ueV")
        check_finite(y, "intensities")
        if e.size < 8:
            raise ValueError("spectrum needs at least 8 points")
        if e.size != y.size:
            raise ValueError("energies and intensities must have equal length")
        check_uniform_grid(e, "energies_ueV")
        if np.any(y < 0):
            raise ValueError("intensities must be non-negative")
        object.__setattr__(self, "energies_ueV", e)
        object.__setattr__(self, "intensities", y)

    @property
    def step_ueV(self) -> float:
        return float(self.energies_ueV[1] - self.energies_ueV[0])


def lorentzian(energies, center: float, fwhm: float,
               amplitude: float = 1.0, offset: float = 0.0) -> np.ndarray:
    """amplitude * (G/2)^2 / ((E - center)^2 + (G/2)^2) + offset."""
    e = np.asarray(energies, dtype=float)
    if not (np.all(np.isfinite(e)) and np.isfinite(center) and np.isfinite(fwhm)):
        raise ValueError("non-finite input to lorentzian")
    half = 0.5 * fwhm
    return amplitude * half * half / ((e - center) ** 2 + half * half) + offset


def gaussian(energies, center: float, fwhm: float,
             amplitude: float = 1.0, offset: float = 0.0) -> np.ndarray:
    """amplitude * exp(-4 ln2 (E - center)^2 / fwhm^2) + offset."""
    e = np.asarray(energies, dtype=float)
    if not (np.all(np.isfinite(e)) and np.isfinite(center) and np.isfinite(fwhm)):
        raise ValueError("non-finite input to gaussian")
    return amplitude * np.exp(-4.0 * np.log(2.0) * (e - center) ** 2 / fwhm ** 2) + offset


def voigt(energies, center: float, lorentzian_fwhm: float, gaussian_fwhm: float,
          amplitude: float = 1.0, offset: float = 0.0) -> np.ndarray:
    """Lorentzian (x) Gaussian convolution profile, peak-normalised.

    Degenerates exactly to the pure profiles when one width is zero;
    raises if both are.
    """
    if lorentzian_fwhm < 0 or gaussian_fwhm < 0:
        raise ValueError("linewidths must be non-negative")
    if lorentzian_fwhm == 0 and gaussian_fwhm == 0:
        raise ValueError("voigt needs at least one non-zero width")
    if gaussian_fwhm == 0:
        return lorentzian(energies, center, lorentzian_fwhm, amplitude, offset)
    if lorentzian_fwhm == 0:
        return gaussian(energies, center, gaussian_fwhm, amplitude, offset)
    e = np.asarray(energies, dtype=float)
    if not (np.all(np.isfinite(e)) and np.isfinite(center)):
        raise ValueError("non-finite input to voigt")
    sigma = gaussian_fwhm / GAUSSIAN_FWHM_PER_SIGMA
    gamma = 0.5 * lorentzian_fwhm
    z = ((e - center) + 1j * gamma) / (sigma * np.sqrt(2.0))
    z0 = (1j * gamma) / (sigma * np.sqrt(2.0))
    peak = wofz(z0).real
    return amplitude * wofz(z).real / peak + offset


def evaluate(energies, params: LineshapeParams) -> np.ndarray:
    """Evaluate ``params`` on an energy grid, dispatching on its kind."""
    if params.kind is LineshapeKind.LORENTZIAN:
        return lorentzian(energies, params.center_ueV, params.lorentzian_fwhm_ueV,
                          params.amplitude, params.offset)
    if params.kind is LineshapeKind.GAUSSIAN:
        return gaussian(energies, params.center_ueV, params.gaussian_fwhm_ueV,
                        params.amplitude, params.offset)
    return voigt(energies, params.center_ueV, params.lorentzian_fwhm_ueV,
                 params.gaussian_fwhm_ueV, params.amplitude, params.offset)


def voigt_fwhm_estimate(lorentzian_fwhm: float, gaussian_fwhm: float) -> float:
    """Olivero-Longbothum approximation of the Voigt FWHM (0.02% accurate)."""
    fl, fg = lorentzian_fwhm, gaussian_fwhm
    return 0.5346 * fl + np.sqrt(0.2166 * fl * fl + fg * fg)


def coherence_time_from_lorentzian(fwhm_ueV: float) -> float:
    """Coherence time (ps) of a Lorentzian line: tau_c = 2 hbar / FWHM."""
    if not np.isfinite(fwhm_ueV) or fwhm_ueV <= 0:
        raise ValueError("Lorentzian FWHM must be positive")
    return 2.0 * HBAR_UEV_PS / fwhm_ueV


def lorentzian_fwhm_from_coherence_time(tau_c_ps: float) -> float:
    """Inverse map: FWHM (ueV) = 2 hbar / tau_c."""
    if not np.isfinite(tau_c_ps) or tau_c_ps <= 0:
        raise ValueError("coherence time must be positive")
    return 2.0 * HBAR_UEV_PS / tau_c_ps


def jitter_sigma_from_gaussian(fwhm_ueV: float) -> float:
    """Energy-jitter standard deviation (ueV) of a Gaussian component."""
    if not np.isfinite(fwhm_ueV) or fwhm_ueV < 0:
        raise ValueError("Gaussian FWHM must be non-negative")
    return fwhm_ueV / GAUSSIAN_FWHM_PER_SIGMA


def gaussian_fwhm_from_jitter_sigma(sigma_ueV: float) -> float:
    if not np.isfinite(sigma_ueV) or sigma_ueV < 0:
        raise ValueError("jitter sigma must be non-negative")
    return sigma_ueV * GAUSSIAN_FWHM_PER_SIGMA


def read_spectrum_csv(path) -> Spectrum:
    """Read ``energy_ueV,intensity`` CSV; ``#`` lines are comments."""
    energies, intensities = _read_two_column_csv(path, SPECTRUM_CSV_HEADER)
    return Spectrum(energies, intensities)


def write_spectrum_csv(path, spectrum: Spectrum) -> None:
    _write_two_column_csv(path, SPECTRUM_CSV_HEADER,
                          spectrum.energies_ueV, spectrum.intensities)


def _read_two_column_csv(path, header: tuple[str, str]):
    lines = [ln for ln in Path(path).read_text().splitlines()
             if ln.strip() and not ln.lstrip().startswith("#")]
    if not lines:
        raise ValueError(f"{path}: empty file")
    got = tuple(s.strip() for s in lines[0].split(","))
    if got != header:
        raise ValueError(f"{path}: expected header {','.join(header)!r}, got {lines[0]!r}")
    rows = list(csv.reader(lines[1:]))
    if any(len(r) != 2 for r in rows):
        raise ValueError(f"{path}: every data row needs exactly two columns")
    data = np.array(rows, dtype=float)
    return data[:, 0], data[:, 1]


def _write_two_column_csv(path, header, col0, col1) -> None:
    body = "\n".join(f"{a:.17g},{b:.17g}" for a, b in zip(col0, col1))
    Path(path).write_text(",".join(header) + "\n" + body + "\n")

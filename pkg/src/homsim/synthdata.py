"""Seeded Monte Carlo synthesis of coincidence histograms and noisy spectra.

All randomness comes from ``numpy.random.Generator`` seeded with PCG64, a
named, portable generator with identical output across platforms for a
fixed integer seed; generation is single-threaded so outputs are bitwise
reproducible.

Coincidence delays are drawn by inverse-CDF sampling from the normalised
piecewise-linear density given by an ideal correlation trace restricted
to the sampling window; each event then receives an independent Gaussian
timing jitter with the detector response width before histogramming.
This reproduces the *shape* statistics of a coincidence histogram; it is
not an event-level photon-stream simulation.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .correlation import CorrelationTrace, DetectorResponse
from .errors import SpanTooNarrowError, WindowExceedsTraceError
from .lineshape import LineshapeKind, LineshapeParams, Spectrum, evaluate, voigt_fwhm_estimate

__all__ = ["NoiseModel", "SynthConfig", "sample_coincidences", "make_spectrum"]


class NoiseModel(str, enum.Enum):
    # 'none' returns the deterministic expected counts per bin;
    # 'poisson' draws actual events (multinomial counting noise)
    NONE = "none"
    POISSON = "poisson"


@dataclass(frozen=True)
class SynthConfig:
    """Settings for one synthetic coincidence experiment."""

    seed: int
    n_events: int
    window_ps: float
    bin_width_ps: float
    noise_model: NoiseModel = NoiseModel.POISSON

    def __post_init__(self):
        object.__setattr__(self, "noise_model", NoiseModel(self.noise_model))
        if self.n_events < 1:
            raise ValueError("n_events must be at least 1")
        if self.bin_width_ps <= 0:
            raise ValueError("bin_width_ps must be positive")
        if self.window_ps < 10.0 * self.bin_width_ps:
            raise ValueError("window_ps must cover at least 10 bins")


def sample_coincidences(ideal_trace: CorrelationTrace, det: DetectorResponse,
                        cfg: SynthConfig) -> CorrelationTrace:
    """Histogram of simulated coincidence delays (values are counts).

    Events whose jittered delay leaves the window are dropped, so edge
    bins are depleted over roughly five detector widths; compare against
    analytic traces on interior bins only.
    """
    n_bins = int(round(cfg.window_ps / cfg.bin_width_ps))
    half_window = n_bins * cfg.bin_width_ps / 2.0  # align window to the bins
    if half_window > ideal_trace.span_ps + 1e-9:
        raise WindowExceedsTraceError(
            f"window +-{half_window} ps exceeds trace span +-{ideal_trace.span_ps} ps")

    inside = np.abs(ideal_trace.taus_ps) <= half_window + 1e-9
    knots = ideal_trace.taus_ps[inside]
    density = ideal_trace.values[inside]
    if knots.size < 2 or np.all(density == 0.0):
        raise ValueError("ideal trace carries no density inside the window")

    edges = cfg.bin_width_ps * (np.arange(n_bins + 1) - n_bins / 2.0)
    centers = 0.5 * (edges[:-1] + edges[1:])

    if cfg.noise_model is NoiseModel.NONE:
        counts = _expected_counts(knots, density, det, cfg, edges)
        return CorrelationTrace(centers, counts)

    rng = np.random.default_rng(cfg.seed)
    delays = _sample_piecewise_linear(rng, knots, density, cfg.n_events)
    delays = delays + rng.normal(0.0, det.sigma_ps, cfg.n_events)
    counts, _ = np.histogram(delays, edges)
    return CorrelationTrace(centers, counts.astype(float))


def _sample_piecewise_linear(rng, knots, density, n):
    """Inverse-CDF draws from the linear interpolant of (knots, density)."""
    seg_mass = 0.5 * (density[1:] + density[:-1]) * np.diff(knots)
    cdf = np.concatenate([[0.0], np.cumsum(seg_mass)])
    total = cdf[-1]
    u = rng.random(n) * total
    idx = np.clip(np.searchsorted(cdf, u, side="right") - 1, 0, knots.size - 2)

    d0 = density[idx]
    d1 = density[idx + 1]
    width = knots[idx + 1] - knots[idx]
    frac = (u - cdf[idx]) / np.maximum(seg_mass[idx], np.finfo(float).tiny)
    slope = d1 - d0
    # within a segment the CDF is quadratic: solve for the local coordinate
    lin = np.abs(slope) <= 1e-12 * np.maximum(d0, 1e-300)
    disc = np.maximum(d0 * d0 + frac * slope * (d0 + d1), 0.0)
    with np.errstate(divide="ignore", invalid="ignore"):
        t = np.where(lin, frac, (np.sqrt(disc) - d0) / np.where(lin, 1.0, slope))
    return knots[idx] + np.clip(t, 0.0, 1.0) * width


def _expected_counts(knots, density, det, cfg, edges):
    """Deterministic per-bin expectation of the sampling process."""
    step = float(knots[1] - knots[0])
    sigma = det.sigma_ps
    half = max(1, int(np.ceil(5.0 * sigma / step)))
    x = np.arange(-half, half + 1) * step
    kernel = np.exp(-0.5 * (x / sigma) ** 2)
    kernel /= kernel.sum()
    # zero padding: events jittered beyond the window are lost
    padded = np.concatenate([np.zeros(half), density, np.zeros(half)])
    blurred = np.convolve(padded, kernel, mode="valid")
    norm = np.trapz(density, knots)
    rate = cfg.n_events * blurred / norm
    cum = np.concatenate([[0.0], np.cumsum(0.5 * (rate[1:] + rate[:-1]) * np.diff(knots))])
    per_bin = np.interp(edges, knots, cum)
    return np.diff(per_bin)


def make_spectrum(params: LineshapeParams, n_points: int, span_ueV: float,
                  noise_pct: float, seed: int) -> Spectrum:
    """Model spectrum on a grid with multiplicative Gaussian noise.

    Each intensity is multiplied by ``1 + noise_pct * N(0, 1)`` (then
    clipped at zero); ``noise_pct=0`` returns exact model samples.
    """
    fwhm = {
        LineshapeKind.LORENTZIAN: params.lorentzian_fwhm_ueV,
        LineshapeKind.GAUSSIAN: params.gaussian_fwhm_ueV,
        LineshapeKind.VOIGT: voigt_fwhm_estimate(params.lorentzian_fwhm_ueV,
                                                 params.gaussian_fwhm_ueV),
    }[params.kind]
    if span_ueV < 3.0 * fwhm:
        raise SpanTooNarrowError(
            f"span {span_ueV} ueV < 3 FWHM = {3 * fwhm:.3g} ueV")
    if n_points < 8:
        raise ValueError("n_points must be at least 8")

    energies = np.linspace(params.center_ueV - span_ueV / 2.0,
                           params.center_ueV + span_ueV / 2.0, n_points)
    values = evaluate(energies, params)
    if noise_pct != 0.0:
        rng = np.random.default_rng(seed)
        values = values * (1.0 + noise_pct * rng.standard_normal(n_points))
    return Spectrum(energies, np.maximum(values, 0.0))

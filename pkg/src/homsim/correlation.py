"""Second-order correlation functions for one and two CW single-photon sources.

The autocorrelation of one source on a Hanbury-Brown-Twiss setup is

    g2(tau) = 1 - (1 - B) exp(-|tau| / tau_r)

with background level ``B`` and radiative lifetime ``tau_r``.  Two
independent sources meeting on a beamsplitter with transmission ``T``
(R = 1 - T), intensities ``Ia, Ib``, wavepacket overlap ``gamma`` and
energy detuning ``dE`` produce the cross-correlation between the two
output ports

    g2x(tau) = [ T R (Ia^2 g2a + Ib^2 g2b) + (T^2 + R^2) Ia Ib
                 - 2 T R Ia Ib gamma^2 g1a(tau) g1b(tau) cos(dE tau / hbar) ]
               / [ (T Ia + R Ib)(R Ia + T Ib) ]

where the interference term is present only for parallel polarisation and

    g1(tau) = exp(-|tau| / tau_c) exp(-sigma_E^2 tau^2 / (2 hbar^2))

is the first-order coherence envelope including a static Gaussian jitter
of the center energy (standard deviation ``sigma_E``).

Measured traces are the ideal ones convolved with the Gaussian timing
response of the coincidence electronics.
"""

from __future__ import annotations

import enum
import warnings
from dataclasses import dataclass

import numpy as np

from .constants import HBAR_UEV_PS, fwhm_to_sigma
from .errors import GridTooCoarseError, SpanTooShortError
from .validation import (
    as_float_array,
    check_finite,
    check_symmetric_grid,
    check_uniform_grid,
)

__all__ = [
    "Polarization",
    "EmitterModel",
    "DetectorResponse",
    "BeamsplitterModel",
    "CorrelationTrace",
    "default_grid",
    "g2_auto_ideal",
    "g1_envelope",
    "g2_cross_ideal",
    "convolve_response",
    "g2_auto_measured",
    "g2_cross_measured",
    "read_trace_csv",
    "write_trace_csv",
]

TRACE_CSV_HEADER = ("tau_ps", "g2")


class Polarization(str, enum.Enum):
    PARALLEL = "parallel"
    ORTHOGONAL = "orthogonal"


@dataclass(frozen=True)
class EmitterModel:
    """One CW-driven single-photon source."""

    tau_r_ps: float
    background: float
    tau_c_ps: float
    jitter_sigma_ueV: float = 0.0
    center_energy_ueV: float = 0.0
    intensity: float = 1.0

    def __post_init__(self):
        if not np.isfinite(self.tau_r_ps) or self.tau_r_ps <= 0:
            raise ValueError("tau_r_ps must be positive")
        if not 0.0 <= self.background <= 1.0:
            raise ValueError("background must lie in [0, 1]")
        if not np.isfinite(self.tau_c_ps) or self.tau_c_ps <= 0:
            raise ValueError("tau_c_ps must be positive")
        if not np.isfinite(self.jitter_sigma_ueV) or self.jitter_sigma_ueV < 0:
            raise ValueError("jitter_sigma_ueV must be non-negative")
        if not np.isfinite(self.intensity) or self.intensity <= 0:
            raise ValueError("intensity must be positive")
        if self.tau_c_ps > 2.0 * self.tau_r_ps:
            # dephasing shortens, never lengthens, coherence
            warnings.warn(
                f"tau_c = {self.tau_c_ps} ps exceeds 2 tau_r = {2 * self.tau_r_ps} ps",
                stacklevel=2,
            )


@dataclass(frozen=True)
class DetectorResponse:
    """Gaussian timing response of the coincidence system."""

    fwhm_ps: float

    def __post_init__(self):
        if not np.isfinite(self.fwhm_ps) or self.fwhm_ps <= 0:
            raise ValueError("fwhm_ps must be positive")

    @property
    def sigma_ps(self) -> float:
        return fwhm_to_sigma(self.fwhm_ps)


@dataclass(frozen=True)
class BeamsplitterModel:
    """Transmission split, wavepacket overlap and polarisation config."""

    transmission: float = 0.5
    overlap: float = 1.0
    polarization: Polarization = Polarization.PARALLEL

    def __post_init__(self):
        if not 0.0 <= self.transmission <= 1.0:
            raise ValueError("transmission must lie in [0, 1]")
        if not 0.0 <= self.overlap <= 1.0:
            raise ValueError("overlap must lie in [0, 1]")
        object.__setattr__(self, "polarization", Polarization(self.polarization))


@dataclass(frozen=True)
class CorrelationTrace:
    """g2 values (or coincidence counts) on a uniform symmetric delay grid."""

    taus_ps: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        taus = as_float_array(self.taus_ps, "taus_ps")
        vals = as_float_array(self.values, "values")
        if taus.size != vals.size:
            raise ValueError("taus and values must have equal length")
        check_finite(taus, "taus_ps")
        check_finite(vals, "values")
        check_uniform_grid(taus, "taus_ps")
        check_symmetric_grid(taus, "taus_ps")
        if np.any(vals < 0):
            raise ValueError("correlation values must be non-negative")
        object.__setattr__(self, "taus_ps", taus)
        object.__setattr__(self, "values", vals)

    @property
    def step_ps(self) -> float:
        return float(self.taus_ps[1] - self.taus_ps[0])

    @property
    def span_ps(self) -> float:
        """One-sided extent of the grid."""
        return float(self.taus_ps[-1])


def default_grid(span_ps: float = 16000.0, step_ps: float = 2.0) -> np.ndarray:
    """Symmetric delay grid +-span at the given step, including zero."""
    n = int(round(span_ps / step_ps))
    return np.arange(-n, n + 1) * step_ps


def g2_auto_ideal(tau_ps, src: EmitterModel) -> np.ndarray:
    """Ideal (pre-convolution) HBT autocorrelation of one source."""
    tau = np.asarray(tau_ps, dtype=float)
    return 1.0 - (1.0 - src.background) * np.exp(-np.abs(tau) / src.tau_r_ps)


def g1_envelope(tau_ps, src: EmitterModel) -> np.ndarray:
    """Magnitude of the first-order coherence, jitter-averaged."""
    tau = np.asarray(tau_ps, dtype=float)
    decay = np.exp(-np.abs(tau) / src.tau_c_ps)
    if src.jitter_sigma_ueV > 0.0:
        decay = decay * np.exp(
            -(src.jitter_sigma_ueV ** 2) * tau * tau / (2.0 * HBAR_UEV_PS ** 2)
        )
    return decay


def g2_cross_ideal(tau_ps, src_a: EmitterModel, src_b: EmitterModel,
                   splitter: BeamsplitterModel, detuning_ueV: float = 0.0) -> np.ndarray:
    """Ideal cross-correlation between the two beamsplitter outputs."""
    tau = np.asarray(tau_ps, dtype=float)
    t = splitter.transmission
    r = 1.0 - t
    ia, ib = src_a.intensity, src_b.intensity
    norm = (t * ia + r * ib) * (r * ia + t * ib)
    if norm <= 0.0:
        raise ValueError("zero total intensity at a detector")

    num = (t * r * (ia * ia * g2_auto_ideal(tau, src_a)
                    + ib * ib * g2_auto_ideal(tau, src_b))
           + (t * t + r * r) * ia * ib)
    if splitter.polarization is Polarization.PARALLEL:
        beat = np.cos(detuning_ueV * tau / HBAR_UEV_PS)
        num = num - (2.0 * t * r * ia * ib * splitter.overlap ** 2
                     * g1_envelope(tau, src_a) * g1_envelope(tau, src_b) * beat)
    return num / norm


def convolve_response(trace: CorrelationTrace, det: DetectorResponse,
                      feature_span_ps: float = 0.0) -> CorrelationTrace:
    """Convolve a trace with the unit-area Gaussian detector kernel.

    The grid must resolve the kernel (step <= fwhm/10) and extend at
    least 5 kernel widths past the features (pass the feature extent via
    ``feature_span_ps`` when known).  Edges are padded with the trace's
    end values, which preserves flat far wings.
    """
    step = trace.step_ps
    if step > det.fwhm_ps / 10.0:
        raise GridTooCoarseError(
            f"step {step} ps > detector fwhm/10 = {det.fwhm_ps / 10.0} ps")
    required = 5.0 * det.fwhm_ps + feature_span_ps
    if trace.span_ps < required:
        raise SpanTooShortError(
            f"trace span {trace.span_ps} ps < required {required} ps")
    kernel = _gaussian_kernel(det, step)
    half = kernel.size // 2
    padded = np.concatenate([
        np.full(half, trace.values[0]),
        trace.values,
        np.full(half, trace.values[-1]),
    ])
    out = np.convolve(padded, kernel, mode="valid")
    return CorrelationTrace(trace.taus_ps, np.maximum(out, 0.0))


def _gaussian_kernel(det: DetectorResponse, step_ps: float) -> np.ndarray:
    sigma = det.sigma_ps
    half = max(1, int(np.ceil(5.0 * sigma / step_ps)))
    x = np.arange(-half, half + 1) * step_ps
    k = np.exp(-0.5 * (x / sigma) ** 2)
    return k / k.sum()


def g2_auto_measured(src: EmitterModel, det: DetectorResponse,
                     taus_ps: np.ndarray | None = None) -> CorrelationTrace:
    """Detector-convolved autocorrelation trace."""
    taus = default_grid() if taus_ps is None else np.asarray(taus_ps, dtype=float)
    ideal = CorrelationTrace(taus, np.maximum(g2_auto_ideal(taus, src), 0.0))
    out = convolve_response(ideal, det, feature_span_ps=10.0 * src.tau_r_ps)
    return _symmetrized(out)


def g2_cross_measured(src_a: EmitterModel, src_b: EmitterModel,
                      splitter: BeamsplitterModel, detuning_ueV: float,
                      det: DetectorResponse,
                      taus_ps: np.ndarray | None = None) -> CorrelationTrace:
    """Detector-convolved two-source cross-correlation trace."""
    taus = default_grid() if taus_ps is None else np.asarray(taus_ps, dtype=float)
    features = 10.0 * max(src_a.tau_r_ps, src_b.tau_r_ps,
                          src_a.tau_c_ps, src_b.tau_c_ps)
    vals = np.maximum(g2_cross_ideal(taus, src_a, src_b, splitter, detuning_ueV), 0.0)
    ideal = CorrelationTrace(taus, vals)
    out = convolve_response(ideal, det, feature_span_ps=features)
    return _symmetrized(out)


def _symmetrized(trace: CorrelationTrace) -> CorrelationTrace:
    # the ideal generators are even in tau, so the convolved trace is
    # even exactly; mirroring removes summation-order float dust
    vals = trace.values
    half = vals.size // 2
    left = vals[:half]
    mid = vals[half:half + 1] if vals.size % 2 else vals[half:half]
    return CorrelationTrace(trace.taus_ps,
                            np.concatenate([left, mid, left[::-1]]))


def read_trace_csv(path) -> CorrelationTrace:
    """Read a ``tau_ps,g2`` CSV (``#`` comments allowed)."""
    from .lineshape import _read_two_column_csv

    taus, values = _read_two_column_csv(path, TRACE_CSV_HEADER)
    return CorrelationTrace(taus, values)


def write_trace_csv(path, trace: CorrelationTrace) -> None:
    from .lineshape import _write_two_column_csv

    _write_two_column_csv(path, TRACE_CSV_HEADER, trace.taus_ps, trace.values)

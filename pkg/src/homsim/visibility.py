"""Two-photon interference visibility.

Visibility contrasts the distinguishable (orthogonal-polarisation) and
indistinguishable (parallel-polarisation) cross-correlations:

    V(tau) = (g2_perp(tau) - g2_par(tau)) / g2_perp(tau)

Post-selected visibility is V at zero delay; sweeping the energy
detuning of one source maps out the spectral width over which the two
sources remain mutually coherent.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .correlation import (
    BeamsplitterModel,
    CorrelationTrace,
    DetectorResponse,
    EmitterModel,
    Polarization,
    g2_cross_ideal,
    g2_cross_measured,
)
from .errors import GridMismatchError
from .validation import as_float_array, check_finite, zero_index

__all__ = [
    "VisibilityCurve",
    "visibility_trace",
    "postselected_visibility",
    "detuning_sweep",
    "curve_fwhm",
    "default_sweep_detunings",
    "read_visibility_csv",
    "write_visibility_csv",
]

VISIBILITY_CSV_HEADER = ("detuning_ueV", "visibility")

# below this level the perpendicular trace carries no usable contrast
PERP_FLOOR = 1e-9


@dataclass(frozen=True)
class VisibilityCurve:
    """Visibility versus energy detuning."""

    detunings_ueV: np.ndarray
    visibilities: np.ndarray

    def __post_init__(self):
        d = as_float_array(self.detunings_ueV, "detunings_ueV")
        v = as_float_array(self.visibilities, "visibilities")
        if d.size != v.size:
            raise ValueError("detunings and visibilities must have equal length")
        check_finite(d, "detunings_ueV")
        check_finite(v, "visibilities")
        if np.any(np.diff(d) <= 0):
            raise ValueError("detunings must be strictly increasing")
        if np.any(v < -1.0) or np.any(v > 1.0):
            raise ValueError("visibilities must lie in [-1, 1]")
        object.__setattr__(self, "detunings_ueV", d)
        object.__setattr__(self, "visibilities", v)


def visibility_trace(perp: CorrelationTrace, para: CorrelationTrace
                     ) -> tuple[CorrelationTrace, np.ndarray]:
    """Pointwise visibility of two traces sharing one delay grid.

    Returns the visibility trace and a boolean mask flagging points where
    the perpendicular trace was below the floor (visibility emitted as 0).
    """
    if perp.taus_ps.size != para.taus_ps.size or not np.array_equal(
            perp.taus_ps, para.taus_ps):
        raise GridMismatchError("perpendicular and parallel traces need identical grids")
    flagged = perp.values < PERP_FLOOR
    safe = np.where(flagged, 1.0, perp.values)
    vis = np.where(flagged, 0.0, (perp.values - para.values) / safe)
    return CorrelationTrace(perp.taus_ps, np.maximum(vis, 0.0)), flagged


def postselected_visibility(src_a: EmitterModel, src_b: EmitterModel,
                            splitter: BeamsplitterModel, detuning_ueV: float,
                            det: DetectorResponse, convolved: bool = True,
                            window_ps: float = 0.0,
                            taus_ps: np.ndarray | None = None) -> float:
    """Visibility at zero delay, from convolved or ideal traces.

    ``window_ps > 0`` averages both traces over |tau| <= window/2 before
    taking the ratio (finite coincidence-window post-selection); the
    default uses the single zero-delay point.
    """
    perp, para = _polarization_pair(src_a, src_b, splitter, detuning_ueV,
                                    det, convolved, taus_ps)
    i0 = zero_index(perp.taus_ps, "taus_ps")
    if window_ps > 0.0:
        half = window_ps / 2.0
        sel = np.abs(perp.taus_ps) <= half + 1e-9
        perp_val = float(np.mean(perp.values[sel]))
        para_val = float(np.mean(para.values[sel]))
    else:
        perp_val = float(perp.values[i0])
        para_val = float(para.values[i0])
    if perp_val < PERP_FLOOR:
        return 0.0
    return (perp_val - para_val) / perp_val


def detuning_sweep(src_a: EmitterModel, src_b: EmitterModel,
                   splitter: BeamsplitterModel, det: DetectorResponse,
                   detunings_ueV, taus_ps: np.ndarray | None = None,
                   window_ps: float = 0.0) -> VisibilityCurve:
    """Convolved post-selected visibility at each detuning."""
    detunings = as_float_array(detunings_ueV, "detunings_ueV")
    check_finite(detunings, "detunings_ueV")
    if np.any(np.abs(detunings) > 100.0):
        raise ValueError("detunings must lie within +-100 ueV")
    vis = np.array([
        postselected_visibility(src_a, src_b, splitter, de, det,
                                convolved=True, window_ps=window_ps,
                                taus_ps=taus_ps)
        for de in detunings
    ])
    return VisibilityCurve(detunings, np.clip(vis, -1.0, 1.0))


def default_sweep_detunings(lo: float = -30.0, hi: float = 30.0,
                            step: float = 0.5) -> np.ndarray:
    n = int(round((hi - lo) / step))
    return lo + step * np.arange(n + 1)


def curve_fwhm(curve: VisibilityCurve) -> float:
    """FWHM (ueV) of a Lorentzian least-squares fit to the curve."""
    from .fitting import fit_lorentzian_peak

    result = fit_lorentzian_peak(curve)
    return float(result.params["fwhm_ueV"])


def _polarization_pair(src_a, src_b, splitter, detuning_ueV, det, convolved,
                       taus_ps):
    perp_bs = replace(splitter, polarization=Polarization.ORTHOGONAL)
    para_bs = replace(splitter, polarization=Polarization.PARALLEL)
    if convolved:
        perp = g2_cross_measured(src_a, src_b, perp_bs, detuning_ueV, det, taus_ps)
        para = g2_cross_measured(src_a, src_b, para_bs, detuning_ueV, det, taus_ps)
    else:
        from .correlation import default_grid

        taus = default_grid() if taus_ps is None else np.asarray(taus_ps, dtype=float)
        perp = CorrelationTrace(
            taus, np.maximum(g2_cross_ideal(taus, src_a, src_b, perp_bs, detuning_ueV), 0.0))
        para = CorrelationTrace(
            taus, np.maximum(g2_cross_ideal(taus, src_a, src_b, para_bs, detuning_ueV), 0.0))
    return perp, para


def read_visibility_csv(path) -> VisibilityCurve:
    """Read a ``detuning_ueV,visibility`` CSV (``#`` comments allowed)."""
    from .lineshape import _read_two_column_csv

    det, vis = _read_two_column_csv(path, VISIBILITY_CSV_HEADER)
    return VisibilityCurve(det, vis)


def write_visibility_csv(path, curve: VisibilityCurve) -> None:
    from .lineshape import _write_two_column_csv

    _write_two_column_csv(path, VISIBILITY_CSV_HEADER,
                          curve.detunings_ueV, curve.visibilities)

"""Quadratic Stark map between vertical electric field and emission energy.

Each emitter follows ``E(F) = e0 + p F + beta F^2`` inside an allowed
field window.  Solving for the field that reaches a target energy picks,
when two in-window roots exist, the one smaller in magnitude (closest to
flat band, minimising carrier-escape risk).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import NoRealRootError, OutOfWindowError
from .validation import check_finite_scalar

__all__ = ["StarkParams", "TuneResult", "energy_at_field", "field_for_energy", "tune_pair"]


@dataclass(frozen=True)
class StarkParams:
    """Parabolic field-to-energy map for one emitter."""

    e0_ueV: float
    dipole_ueV_per_kvcm: float
    polarizability_ueV_per_kvcm2: float
    field_min_kvcm: float
    field_max_kvcm: float

    def __post_init__(self):
        for name in ("e0_ueV", "dipole_ueV_per_kvcm", "polarizability_ueV_per_kvcm2",
                     "field_min_kvcm", "field_max_kvcm"):
            check_finite_scalar(getattr(self, name), name)
        if not self.field_min_kvcm < self.field_max_kvcm:
            raise ValueError("field_min_kvcm must be below field_max_kvcm")


@dataclass(frozen=True)
class TuneResult:
    field_kvcm: float
    residual_ueV: float


def energy_at_field(params: StarkParams, field_kvcm: float) -> float:
    """Emission energy (ueV) at a vertical field inside the window."""
    f = check_finite_scalar(field_kvcm, "field_kvcm")
    if not params.field_min_kvcm <= f <= params.field_max_kvcm:
        raise OutOfWindowError(
            f"field {f} kV/cm outside window "
            f"[{params.field_min_kvcm}, {params.field_max_kvcm}]"
        )
    return (params.e0_ueV
            + params.dipole_ueV_per_kvcm * f
            + params.polarizability_ueV_per_kvcm2 * f * f)


def field_for_energy(params: StarkParams, target_ueV: float) -> float:
    """Field (kV/cm) at which the emitter reaches ``target_ueV``.

    Raises ``NoRealRootError`` if the target lies beyond the parabola
    extremum and ``OutOfWindowError`` if all real roots fall outside the
    allowed window.
    """
    target = check_finite_scalar(target_ueV, "target_ueV")
    p = params.dipole_ueV_per_kvcm
    beta = params.polarizability_ueV_per_kvcm2
    c = params.e0_ueV - target

    if beta == 0.0:
        if p == 0.0:
            raise NoRealRootError("energy does not depend on field")
        roots = [-c / p]
    else:
        disc = p * p - 4.0 * beta * c
        if disc < 0.0:
            raise NoRealRootError(
                f"target {target} ueV beyond parabola extremum")
        sq = math.sqrt(disc)
        if disc == 0.0:
            roots = [-p / (2.0 * beta)]
        else:
            # numerically stable quadratic roots
            q = -0.5 * (p + math.copysign(sq, p if p != 0.0 else 1.0))
            roots = [q / beta, c / q]

    # one Newton polish per root against the exact parabola
    polished = []
    for f in roots:
        for _ in range(2):
            slope = p + 2.0 * beta * f
            if slope != 0.0:
                f = f - (params.e0_ueV + p * f + beta * f * f - target) / slope
        polished.append(f)

    tol = 1e-9 * max(abs(params.field_min_kvcm), abs(params.field_max_kvcm), 1.0)
    in_window = [f for f in polished
                 if params.field_min_kvcm - tol <= f <= params.field_max_kvcm + tol]
    if not in_window:
        raise OutOfWindowError(
            f"roots {polished} kV/cm all outside window "
            f"[{params.field_min_kvcm}, {params.field_max_kvcm}]"
        )
    best = min(in_window, key=lambda f: (abs(f), -f))
    return float(np.clip(best, params.field_min_kvcm, params.field_max_kvcm))


def tune_pair(fixed_energy_ueV: float, tunable: StarkParams) -> TuneResult:
    """Field that brings a tunable emitter into degeneracy with a fixed one."""
    field = field_for_energy(tunable, fixed_energy_ueV)
    residual = energy_at_field(tunable, field) - fixed_energy_ueV
    return TuneResult(field_kvcm=field, residual_ueV=residual)

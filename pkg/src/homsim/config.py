"""Experiment configuration: JSON schema with units embedded in key names.

Energies are ueV, times ps, fields kV/cm.  Each emitter carries either a
``tau_c_ps`` directly or a ``lorentzian_fwhm_ueV`` it is derived from
(``tau_c = 2 hbar / FWHM``), and either ``jitter_sigma_ueV`` or a
``gaussian_fwhm_ueV``.  See ``docs/config-schema.md`` for the full schema.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .correlation import BeamsplitterModel, DetectorResponse, EmitterModel
from .lineshape import coherence_time_from_lorentzian, jitter_sigma_from_gaussian
from .stark import StarkParams

__all__ = ["EmitterEntry", "GridSettings", "SweepSettings", "ExperimentConfig",
           "load_experiment_config"]


@dataclass(frozen=True)
class EmitterEntry:
    model: EmitterModel
    stark: StarkParams | None = None


@dataclass(frozen=True)
class GridSettings:
    tau_span_ps: float = 16000.0
    tau_step_ps: float = 2.0

    def taus(self) -> np.ndarray:
        n = int(round(self.tau_span_ps / self.tau_step_ps))
        return np.arange(-n, n + 1) * self.tau_step_ps


@dataclass(frozen=True)
class SweepSettings:
    detuning_min_ueV: float = -30.0
    detuning_max_ueV: float = 30.0
    detuning_step_ueV: float = 0.5

    def detunings(self) -> np.ndarray:
        n = int(round((self.detuning_max_ueV - self.detuning_min_ueV)
                      / self.detuning_step_ueV))
        return self.detuning_min_ueV + self.detuning_step_ueV * np.arange(n + 1)


@dataclass(frozen=True)
class ExperimentConfig:
    emitters: dict[str, EmitterEntry]
    detector: DetectorResponse
    beamsplitter: BeamsplitterModel
    grid: GridSettings
    sweep: SweepSettings

    def emitter(self, name: str) -> EmitterEntry:
        try:
            return self.emitters[name]
        except KeyError:
            known = ", ".join(sorted(self.emitters))
            raise ValueError(f"unknown emitter {name!r} (have: {known})") from None


def load_experiment_config(path) -> ExperimentConfig:
    """Parse and validate a JSON experiment configuration."""
    raw = json.loads(Path(path).read_text())
    if not isinstance(raw, dict):
        raise ValueError(f"{path}: top level must be a JSON object")

    emitters_raw = _require(raw, "emitters", dict, path)
    if not emitters_raw:
        raise ValueError(f"{path}: 'emitters' must name at least one emitter")
    emitters = {name: _parse_emitter(spec, f"{path}:emitters.{name}")
                for name, spec in emitters_raw.items()}

    det_raw = _require(raw, "detector", dict, path)
    detector = DetectorResponse(fwhm_ps=float(det_raw["fwhm_ps"]))

    bs_raw = raw.get("beamsplitter", {})
    beamsplitter = BeamsplitterModel(
        transmission=float(bs_raw.get("transmission", 0.5)),
        overlap=float(bs_raw.get("overlap", 1.0)),
        polarization=bs_raw.get("polarization", "parallel"),
    )

    grid_raw = raw.get("grid", {})
    grid = GridSettings(
        tau_span_ps=float(grid_raw.get("tau_span_ps", 16000.0)),
        tau_step_ps=float(grid_raw.get("tau_step_ps", 2.0)),
    )
    sweep_raw = raw.get("sweep", {})
    sweep = SweepSettings(
        detuning_min_ueV=float(sweep_raw.get("detuning_min_ueV", -30.0)),
        detuning_max_ueV=float(sweep_raw.get("detuning_max_ueV", 30.0)),
        detuning_step_ueV=float(sweep_raw.get("detuning_step_ueV", 0.5)),
    )
    return ExperimentConfig(emitters=emitters, detector=detector,
                            beamsplitter=beamsplitter, grid=grid, sweep=sweep)


def _require(raw: dict, key: str, typ, where):
    if key not in raw:
        raise ValueError(f"{where}: missing required key {key!r}")
    val = raw[key]
    if not isinstance(val, typ):
        raise ValueError(f"{where}: {key!r} must be a {typ.__name__}")
    return val


def _parse_emitter(spec: dict, where: str) -> EmitterEntry:
    if not isinstance(spec, dict):
        raise ValueError(f"{where}: emitter entry must be an object")

    if "tau_c_ps" in spec and "lorentzian_fwhm_ueV" in spec:
        raise ValueError(f"{where}: give tau_c_ps or lorentzian_fwhm_ueV, not both")
    if "tau_c_ps" in spec:
        tau_c = float(spec["tau_c_ps"])
    elif "lorentzian_fwhm_ueV" in spec:
        tau_c = coherence_time_from_lorentzian(float(spec["lorentzian_fwhm_ueV"]))
    else:
        raise ValueError(f"{where}: needs tau_c_ps or lorentzian_fwhm_ueV")

    if "jitter_sigma_ueV" in spec and "gaussian_fwhm_ueV" in spec:
        raise ValueError(f"{where}: give jitter_sigma_ueV or gaussian_fwhm_ueV, not both")
    if "jitter_sigma_ueV" in spec:
        jitter = float(spec["jitter_sigma_ueV"])
    elif "gaussian_fwhm_ueV" in spec:
        jitter = jitter_sigma_from_gaussian(float(spec["gaussian_fwhm_ueV"]))
    else:
        jitter = 0.0

    model = EmitterModel(
        tau_r_ps=float(spec["tau_r_ps"]),
        background=float(spec.get("background", 0.0)),
        tau_c_ps=tau_c,
        jitter_sigma_ueV=jitter,
        center_energy_ueV=float(spec.get("center_energy_ueV", 0.0)),
        intensity=float(spec.get("intensity", 1.0)),
    )

    stark = None
    if spec.get("stark") is not None:
        s = spec["stark"]
        stark = StarkParams(
            e0_ueV=float(s["e0_ueV"]),
            dipole_ueV_per_kvcm=float(s["dipole_ueV_per_kvcm"]),
            polarizability_ueV_per_kvcm2=float(s["polarizability_ueV_per_kvcm2"]),
            field_min_kvcm=float(s["field_min_kvcm"]),
            field_max_kvcm=float(s["field_max_kvcm"]),
        )
    return EmitterEntry(model=model, stark=stark)

"""homsim: two-photon interference between remote, tunable single-photon emitters.

Forward models (lineshapes, Stark tuning, correlation functions,
visibility) are plain functions over frozen dataclasses; the fitting
routines are also exposed as scikit-learn-style estimators in
``homsim.estimators``.
"""

from .constants import HBAR_UEV_PS
from .correlation import (
    BeamsplitterModel,
    CorrelationTrace,
    DetectorResponse,
    EmitterModel,
    Polarization,
    convolve_response,
    default_grid,
    g1_envelope,
    g2_auto_ideal,
    g2_auto_measured,
    g2_cross_ideal,
    g2_cross_measured,
    read_trace_csv,
    write_trace_csv,
)
from .config import ExperimentConfig, load_experiment_config
from .errors import (
    DegenerateDataError,
    GridMismatchError,
    GridTooCoarseError,
    HomsimError,
    NonPhysicalError,
    NoPeakError,
    NoRealRootError,
    NotConvergedError,
    OutOfWindowError,
    SpanTooNarrowError,
    SpanTooShortError,
    WindowExceedsTraceError,
)
from .fitting import FitResult, fit_g2_auto, fit_lineshape, fit_lorentzian_peak
from .lineshape import (
    LineshapeKind,
    LineshapeParams,
    Spectrum,
    coherence_time_from_lorentzian,
    evaluate,
    gaussian,
    jitter_sigma_from_gaussian,
    lorentzian,
    read_spectrum_csv,
    voigt,
    write_spectrum_csv,
)
from .stark import StarkParams, TuneResult, energy_at_field, field_for_energy, tune_pair
from .synthdata import NoiseModel, SynthConfig, make_spectrum, sample_coincidences
from .visibility import (
    VisibilityCurve,
    curve_fwhm,
    detuning_sweep,
    postselected_visibility,
    read_visibility_csv,
    visibility_trace,
    write_visibility_csv,
)

__version__ = "0.1.0"

_LAZY_ESTIMATORS = {"LineshapeFit", "G2AutoFit", "LorentzianPeakFit"}


def __getattr__(name):
    # estimators pull in scikit-learn; import only on demand
    if name in _LAZY_ESTIMATORS:
        from . import estimators

        return getattr(estimators, name)
    raise AttributeError(f"module {__name__!r} has no attribute {name!r}")

"""Scikit-learn-compatible estimator wrappers around the fitting routines.

Each estimator follows the standard contract: hyperparameters are set in
``__init__`` and mirrored by ``get_params``/``set_params``, ``fit(X, y)``
returns ``self`` and stores fitted quantities in trailing-underscore
attributes, and ``predict(X)`` evaluates the fitted model.  ``X`` may be
a 1-D array or a single-column 2-D array, so the estimators compose with
pipelines and model-selection utilities.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, RegressorMixin
from sklearn.exceptions import NotFittedError

from .correlation import CorrelationTrace, DetectorResponse, convolve_response
from .fitting import fit_g2_auto, fit_lineshape, fit_lorentzian_peak
from .lineshape import LineshapeKind, LineshapeParams, Spectrum, evaluate, lorentzian
from .validation import as_float_array
from .visibility import VisibilityCurve

__all__ = ["LineshapeFit", "G2AutoFit", "LorentzianPeakFit"]


def _check_fitted(est, attr="result_"):
    if not hasattr(est, attr):
        raise NotFittedError(
            f"{type(est).__name__} is not fitted yet; call fit(X, y) first")


class LineshapeFit(RegressorMixin, BaseEstimator):
    """Fit a Lorentzian/Gaussian/Voigt profile to (energy, intensity) data.

    Parameters
    ----------
    kind : {'lorentzian', 'gaussian', 'voigt'}
    initial : LineshapeParams or None
        Optional starting point; otherwise seeded from moments.
    weights : {None, 'poisson'}
    """

    def __init__(self, kind="lorentzian", initial=None, weights=None):
        self.kind = kind
        self.initial = initial
        self.weights = weights

    def fit(self, X, y):
        energies = as_float_array(X, "X")
        intensities = as_float_array(y, "y")
        spectrum = Spectrum(energies, intensities)
        self.result_ = fit_lineshape(spectrum, self.kind, initial=self.initial,
                                     weights=self.weights)
        self.params_ = dict(self.result_.params)
        return self

    def predict(self, X):
        _check_fitted(self)
        p = self.params_
        params = LineshapeParams(
            kind=LineshapeKind(self.kind),
            center_ueV=p["center_ueV"],
            lorentzian_fwhm_ueV=p.get("lorentzian_fwhm_ueV", 0.0),
            gaussian_fwhm_ueV=p.get("gaussian_fwhm_ueV", 0.0),
            amplitude=max(p["amplitude"], np.finfo(float).tiny),
            offset=max(p["offset"], 0.0),
        )
        return evaluate(as_float_array(X, "X"), params)


class G2AutoFit(RegressorMixin, BaseEstimator):
    """Fit (background, lifetime) of a detector-convolved autocorrelation."""

    def __init__(self, detector_fwhm_ps=428.0, weights=None):
        self.detector_fwhm_ps = detector_fwhm_ps
        self.weights = weights

    def fit(self, X, y):
        taus = as_float_array(X, "X")
        values = as_float_array(y, "y")
        trace = CorrelationTrace(taus, values)
        det = DetectorResponse(fwhm_ps=self.detector_fwhm_ps)
        self.result_ = fit_g2_auto(trace, det, weights=self.weights)
        self.background_ = self.result_.params["background"]
        self.lifetime_ps_ = self.result_.params["lifetime_ps"]
        self.scale_ = self.result_.params["scale"]
        return self

    def predict(self, X):
        _check_fitted(self)
        taus = as_float_array(X, "X")
        ideal = 1.0 - (1.0 - self.background_) * np.exp(-np.abs(taus) / self.lifetime_ps_)
        trace = CorrelationTrace(taus, np.maximum(ideal, 0.0))
        det = DetectorResponse(fwhm_ps=self.detector_fwhm_ps)
        return self.scale_ * convolve_response(trace, det).values


class LorentzianPeakFit(RegressorMixin, BaseEstimator):
    """Fit a Lorentzian peak (plus floor) to a visibility-vs-detuning curve."""

    def fit(self, X, y):
        detunings = as_float_array(X, "X")
        visibilities = as_float_array(y, "y")
        curve = VisibilityCurve(detunings, visibilities)
        self.result_ = fit_lorentzian_peak(curve)
        self.center_ueV_ = self.result_.params["center_ueV"]
        self.fwhm_ueV_ = self.result_.params["fwhm_ueV"]
        self.amplitude_ = self.result_.params["amplitude"]
        self.offset_ = self.result_.params["offset"]
        return self

    def predict(self, X):
        _check_fitted(self)
        return lorentzian(as_float_array(X, "X"), self.center_ueV_,
                          self.fwhm_ueV_, self.amplitude_, self.offset_)

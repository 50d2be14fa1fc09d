"""Damped least-squares estimation of lineshape, autocorrelation and
visibility-peak parameters.

The optimizer is a small Levenberg-Marquardt loop over finite-difference
Jacobians: cost is non-increasing across accepted steps, convergence is
declared when the (projected) relative step drops below ``step_tol``, and
the iteration cap is 200.  Parameter constraints (background in [0, 1],
positive widths and lifetimes) are enforced by projecting trial steps.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import lineshape as ls
from .correlation import CorrelationTrace, DetectorResponse, convolve_response, g2_auto_ideal
from .errors import DegenerateDataError, NoPeakError, NonPhysicalError, NotConvergedError
from .visibility import VisibilityCurve

__all__ = [
    "FitResult",
    "LMState",
    "levenberg_marquardt",
    "half_max_width",
    "fit_lineshape",
    "fit_g2_auto",
    "fit_lorentzian_peak",
]

MAX_ITERATIONS = 200
STEP_TOL = 1e-10
FD_STEP = 1e-6
WIDTH_FLOOR = 1e-12
LIFETIME_FLOOR = 1e-3  # ps


@dataclass
class FitResult:
    """Outcome of one least-squares fit."""

    params: dict[str, float]
    covariance_diag: dict[str, float]
    residuals: np.ndarray
    chi2_reduced: float
    converged: bool
    iterations: int

    def report(self) -> str:
        lines = []
        for key, val in self.params.items():
            err = self.covariance_diag.get(key, float("nan"))
            lines.append(f"  {key:24s} = {val:.6g} +- {np.sqrt(max(err, 0.0)):.3g}")
        lines.append(f"  {'chi2_reduced':24s} = {self.chi2_reduced:.6g}")
        lines.append(f"  {'iterations':24s} = {self.iterations}")
        lines.append(f"  {'converged':24s} = {self.converged}")
        return "\n".join(lines)


@dataclass
class LMState:
    """Raw optimizer state, mainly for inspection in tests."""

    x: np.ndarray
    cost_history: list = field(default_factory=list)
    iterations: int = 0
    converged: bool = False


def levenberg_marquardt(residual_fn, x0, project=None,
                        max_iterations: int = MAX_ITERATIONS,
                        step_tol: float = STEP_TOL) -> LMState:
    """Minimise ``sum(residual_fn(x)**2)`` from ``x0``.

    ``project`` maps a trial parameter vector onto the feasible set.
    Raises ``NotConvergedError`` when the iteration cap is hit or the
    damping search stalls away from a stationary point.
    """
    project = project or (lambda p: p)
    x = project(np.asarray(x0, dtype=float).copy())
    r = np.asarray(residual_fn(x), dtype=float)
    cost = float(r @ r)
    state = LMState(x=x, cost_history=[cost])
    lam = 1e-3

    while state.iterations < max_iterations:
        state.iterations += 1
        jac = _forward_jacobian(residual_fn, x, r)
        jtj = jac.T @ jac
        grad = jac.T @ r
        diag = np.diag(jtj).copy()
        diag[diag <= 0.0] = 1.0

        accepted = False
        while lam <= 1e14:
            try:
                delta = np.linalg.solve(jtj + lam * np.diag(diag), -grad)
            except np.linalg.LinAlgError:
                delta = None
            if delta is not None and np.all(np.isfinite(delta)):
                trial = project(x + delta)
                step = np.max(np.abs(trial - x) / np.maximum(np.abs(x), 1.0))
                if step <= step_tol:
                    state.converged = True
                    break
                r_trial = np.asarray(residual_fn(trial), dtype=float)
                cost_trial = float(r_trial @ r_trial)
                if np.isfinite(cost_trial) and cost_trial < cost:
                    x, r, cost = trial, r_trial, cost_trial
                    state.cost_history.append(cost)
                    lam = max(lam / 5.0, 1e-12)
                    accepted = True
                    if step <= step_tol:
                        state.converged = True
                    break
            lam *= 10.0
        state.x = x
        if state.converged:
            break
        if not accepted:
            raise NotConvergedError("damping search stalled", partial_result=state)

    if not state.converged:
        raise NotConvergedError(
            f"no convergence within {max_iterations} iterations",
            partial_result=state)
    return state


def _forward_jacobian(residual_fn, x, r0):
    jac = np.empty((r0.size, x.size))
    for j in range(x.size):
        h = FD_STEP * max(abs(x[j]), 1.0)
        xp = x.copy()
        xp[j] += h
        jac[:, j] = (np.asarray(residual_fn(xp), dtype=float) - r0) / h
    return jac


def _covariance_diag(residual_fn, x, cost, n_data):
    dof = max(n_data - x.size, 1)
    chi2_red = cost / dof
    r = np.asarray(residual_fn(x), dtype=float)
    jac = _forward_jacobian(residual_fn, x, r)
    jtj = jac.T @ jac
    try:
        cov = np.linalg.inv(jtj)
    except np.linalg.LinAlgError:
        cov = np.linalg.pinv(jtj)
    return chi2_red, np.maximum(np.diag(cov) * chi2_red, 0.0)


def half_max_width(x: np.ndarray, y: np.ndarray) -> tuple[float, float, float, float]:
    """Moment-style seed: (center, fwhm, amplitude, offset).

    Center is the argmax, amplitude max - min, FWHM from interpolated
    half-maximum crossings either side of the peak.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    offset = float(np.min(y))
    amplitude = float(np.max(y) - offset)
    if amplitude <= 0.0:
        raise DegenerateDataError("data are flat")
    i_pk = int(np.argmax(y))
    center = float(x[i_pk])
    level = offset + amplitude / 2.0
    step = float(np.mean(np.diff(x)))

    left = None
    for i in range(i_pk, 0, -1):
        if y[i - 1] < level <= y[i]:
            frac = (level - y[i - 1]) / (y[i] - y[i - 1])
            left = x[i - 1] + frac * (x[i] - x[i - 1])
            break
    right = None
    for i in range(i_pk, x.size - 1):
        if y[i + 1] < level <= y[i]:
            frac = (y[i] - level) / (y[i] - y[i + 1])
            right = x[i] + frac * (x[i + 1] - x[i])
            break
    if left is None or right is None:
        raise DegenerateDataError("no half-maximum crossings either side of the peak")
    fwhm = max(float(right - left), 2.0 * abs(step))
    return center, fwhm, amplitude, offset


def _weights_sigma(y: np.ndarray, weights: str | None) -> np.ndarray:
    if weights is None:
        return np.ones_like(y)
    if weights == "poisson":
        return np.sqrt(np.maximum(y, 1.0))
    raise ValueError(f"unknown weighting {weights!r}")


def fit_lineshape(spectrum: ls.Spectrum, kind: str | ls.LineshapeKind,
                  initial: ls.LineshapeParams | None = None,
                  weights: str | None = None) -> FitResult:
    """Least-squares lineshape fit of a spectrum.

    Without ``initial``, seeds from moments (argmax center, half-maximum
    FWHM, max - min amplitude).  ``weights='poisson'`` weights residuals
    by sqrt(max(count, 1)) for counting data.
    """
    kind = ls.LineshapeKind(kind)
    x = spectrum.energies_ueV
    y = spectrum.intensities
    sigma = _weights_sigma(y, weights)

    if initial is not None:
        if initial.kind is not kind:
            raise ValueError("initial parameters are for a different lineshape kind")
        center0 = initial.center_ueV
        amp0, off0 = initial.amplitude, initial.offset
        fl0 = initial.lorentzian_fwhm_ueV
        fg0 = initial.gaussian_fwhm_ueV
        fwhm0 = {
            ls.LineshapeKind.LORENTZIAN: fl0,
            ls.LineshapeKind.GAUSSIAN: fg0,
            ls.LineshapeKind.VOIGT: ls.voigt_fwhm_estimate(fl0, fg0),
        }[kind]
    else:
        center0, fwhm0, amp0, off0 = half_max_width(x, y)
        # an even Lorentzian/Gaussian split reproduces a Voigt FWHM of ~1.64x
        fl0 = fg0 = 0.61 * fwhm0 if kind is ls.LineshapeKind.VOIGT else fwhm0

    if (x[-1] - x[0]) < 3.0 * fwhm0:
        raise DegenerateDataError(
            f"spectrum span {x[-1] - x[0]:.3g} ueV < 3 estimated FWHM")

    if kind is ls.LineshapeKind.VOIGT:
        names = ["center_ueV", "lorentzian_fwhm_ueV", "gaussian_fwhm_ueV",
                 "amplitude", "offset"]
        x0 = np.array([center0, fl0, fg0, amp0, off0])

        def model(p):
            return ls.voigt(x, p[0], p[1], p[2], p[3], p[4])

        def project(p):
            q = p.copy()
            q[1] = max(q[1], WIDTH_FLOOR)
            q[2] = max(q[2], WIDTH_FLOOR)
            return q
    else:
        profile = ls.lorentzian if kind is ls.LineshapeKind.LORENTZIAN else ls.gaussian
        names = ["center_ueV",
                 "lorentzian_fwhm_ueV" if kind is ls.LineshapeKind.LORENTZIAN
                 else "gaussian_fwhm_ueV",
                 "amplitude", "offset"]
        width0 = fl0 if kind is ls.LineshapeKind.LORENTZIAN else fg0
        x0 = np.array([center0, width0 if width0 > 0 else fwhm0, amp0, off0])

        def model(p):
            return profile(x, p[0], p[1], p[2], p[3])

        def project(p):
            q = p.copy()
            q[1] = max(q[1], WIDTH_FLOOR)
            return q

    return _run_fit(model, x0, project, names, y, sigma)


def fit_g2_auto(trace: CorrelationTrace, det: DetectorResponse,
                weights: str | None = None) -> FitResult:
    """Fit (background, lifetime) of a detector-convolved autocorrelation.

    Accepts normalised g2 traces or raw coincidence-count histograms; the
    input is normalised by its far-wing mean and a free scale factor
    absorbs the remaining normalisation error.  Bins within two detector
    FWHM of the grid edge are excluded from the cost (incomplete
    convolution support there).  Raises ``NonPhysicalError`` if the
    lifetime collapses to zero.
    """
    taus = trace.taus_ps
    values = trace.values
    guard = np.abs(taus) <= trace.span_ps - 2.0 * det.fwhm_ps
    if guard.sum() < 8:
        raise DegenerateDataError("too few bins inside the edge-guarded region")

    n_wing = max(1, int(0.15 * guard.sum() / 2))
    guarded_idx = np.where(guard)[0]
    wing_idx = np.concatenate([guarded_idx[:n_wing], guarded_idx[-n_wing:]])
    wing = float(np.mean(values[wing_idx]))
    if wing <= 0.0:
        raise DegenerateDataError("far-wing level is not positive")
    y = values / wing
    sigma_full = _weights_sigma(values, weights) / wing

    yg = y[guard]
    vmin = float(np.min(yg))
    b0 = float(np.clip(vmin, 0.0, 1.0))
    tau0 = _dip_width_seed(taus[guard], yg, det)

    def model_full(p):
        scale, b, tau_r = p
        src_vals = 1.0 - (1.0 - b) * np.exp(-np.abs(taus) / tau_r)
        ideal = CorrelationTrace(taus, np.maximum(src_vals, 0.0))
        conv = convolve_response(ideal, det)
        return scale * conv.values

    def model(p):
        return model_full(p)[guard]

    def project(p):
        q = p.copy()
        q[0] = max(q[0], 1e-12)
        q[1] = float(np.clip(q[1], 0.0, 1.0))
        q[2] = max(q[2], LIFETIME_FLOOR)
        return q

    names = ["scale", "background", "lifetime_ps"]
    x0 = np.array([1.0, b0, tau0])
    result = _run_fit(model, x0, project, names, yg, sigma_full[guard])

    if result.params["lifetime_ps"] <= 2.0 * LIFETIME_FLOOR:
        raise NonPhysicalError("fitted lifetime collapsed to zero")
    # report residuals over the full grid (edge bins included)
    full = model_full(np.array([result.params[k] for k in names]))
    result.residuals = y - full
    return result


def _dip_width_seed(taus, y, det):
    # half-depth half-width of an exponential dip equals tau_r ln 2
    vmin = float(np.min(y))
    level = (1.0 + vmin) / 2.0
    below = y < level
    if not below.any():
        return det.fwhm_ps
    idx = np.where(below)[0]
    half_width = (taus[idx[-1]] - taus[idx[0]]) / 2.0
    return max(float(half_width) / np.log(2.0), float(det.fwhm_ps) / 10.0)


def fit_lorentzian_peak(curve: VisibilityCurve) -> FitResult:
    """Lorentzian (plus constant floor) fit of a visibility peak."""
    x = curve.detunings_ueV
    y = curve.visibilities
    if x.size < 8:
        raise NoPeakError("curve needs at least 8 points")
    i_pk = int(np.argmax(y))
    if i_pk == 0 or i_pk == x.size - 1:
        raise NoPeakError("maximum sits on the curve boundary")
    center0, fwhm0, amp0, off0 = half_max_width(x, y)

    def model(p):
        return ls.lorentzian(x, p[0], p[1], p[2], p[3])

    def project(p):
        q = p.copy()
        q[1] = max(q[1], WIDTH_FLOOR)
        return q

    names = ["center_ueV", "fwhm_ueV", "amplitude", "offset"]
    x0 = np.array([center0, fwhm0, amp0, off0])
    return _run_fit(model, x0, project, names, y, np.ones_like(y))


def _run_fit(model, x0, project, names, y, sigma) -> FitResult:
    def residual_fn(p):
        return (y - model(p)) / sigma

    try:
        state = levenberg_marquardt(residual_fn, x0, project=project)
    except NotConvergedError as exc:
        partial = exc.partial_result
        if partial is not None:
            exc.partial_result = _build_result(
                residual_fn, model, partial.x, names, y,
                converged=False, iterations=partial.iterations)
        raise
    return _build_result(residual_fn, model, state.x, names, y,
                         converged=True, iterations=state.iterations)


def _build_result(residual_fn, model, x, names, y, converged, iterations):
    r = np.asarray(residual_fn(x), dtype=float)
    cost = float(r @ r)
    chi2_red, cov_diag = _covariance_diag(residual_fn, x, cost, y.size)
    return FitResult(
        params=dict(zip(names, (float(v) for v in x))),
        covariance_diag=dict(zip(names, (float(v) for v in cov_diag))),
        residuals=y - np.asarray(model(x), dtype=float),
        chi2_reduced=chi2_red,
        converged=converged,
        iterations=iterations,
    )

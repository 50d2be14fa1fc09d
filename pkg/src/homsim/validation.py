"""Input-validation helpers shared by the domain types and estimators."""

from __future__ import annotations

import numpy as np


def as_float_array(values, name: str = "array") -> np.ndarray:
    """Coerce to a contiguous 1-D float64 array, flattening (n, 1) columns."""
    arr = np.asarray(values, dtype=float)
    if arr.ndim == 2 and arr.shape[1] == 1:
        arr = arr[:, 0]
    if arr.ndim != 1:
        raise ValueError(f"{name} must be one-dimensional, got shape {arr.shape}")
    return np.ascontiguousarray(arr)


def check_finite(arr: np.ndarray, name: str = "array") -> None:
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains non-finite values")


def check_finite_scalar(value: float, name: str = "value") -> float:
    value = float(value)
    if not np.isfinite(value):
        raise ValueError(f"{name} must be finite, got {value!r}")
    return value


def check_uniform_grid(x: np.ndarray, name: str = "grid", rtol: float = 1e-6) -> float:
    """Require a strictly increasing uniform grid; return the step."""
    if x.size < 2:
        raise ValueError(f"{name} needs at least two points")
    steps = np.diff(x)
    step = float(np.mean(steps))
    if step <= 0 or np.any(steps <= 0):
        raise ValueError(f"{name} must be strictly increasing")
    if np.max(np.abs(steps - step)) > rtol * abs(step):
        raise ValueError(f"{name} must have a constant step")
    return step


def check_symmetric_grid(x: np.ndarray, name: str = "grid", rtol: float = 1e-6) -> None:
    """Require the grid to be mirror-symmetric about zero."""
    step = float(np.mean(np.diff(x)))
    if np.max(np.abs(x + x[::-1])) > rtol * abs(step):
        raise ValueError(f"{name} must be symmetric about zero")


def zero_index(x: np.ndarray, name: str = "grid") -> int:
    """Index of the grid point at (or numerically at) zero."""
    idx = int(np.argmin(np.abs(x)))
    step = float(np.mean(np.diff(x))) if x.size > 1 else 1.0
    if abs(x[idx]) > 1e-9 * max(abs(step), 1.0):
        raise ValueError(f"{name} has no point at zero delay")
    return idx

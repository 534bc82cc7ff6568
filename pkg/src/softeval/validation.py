"""Input validation helpers.

Small check functions in the spirit of ``sklearn.utils.validation``: each
normalizes to ``float64`` ndarrays and raises a typed error naming the
offending input, so malformed data never reaches the numeric core.
"""

from __future__ import annotations

import numpy as np

from .errors import AlignmentError, ValidationError


def as_float_array(x, name: str, ndim: int | None = None) -> np.ndarray:
    """Convert ``x`` to a float64 ndarray, rejecting non-finite values."""
    arr = np.asarray(x, dtype=np.float64)
    if ndim is not None and arr.ndim != ndim:
        raise ValidationError(f"{name}: expected {ndim}-dimensional input, got {arr.ndim}")
    if not np.all(np.isfinite(arr)):
        raise ValidationError(f"{name}: contains non-finite values")
    return arr


def check_unit_interval(x, name: str, ndim: int | None = None) -> np.ndarray:
    """Validate that every value lies in [0, 1] and return a float64 array."""
    arr = as_float_array(x, name, ndim=ndim)
    if arr.size and (arr.min() < 0.0 or arr.max() > 1.0):
        bad = np.unravel_index(int(np.argmax((arr < 0.0) | (arr > 1.0))), arr.shape)
        raise ValidationError(
            f"{name}: value {arr[bad]!r} at index {tuple(int(i) for i in bad)} outside [0, 1]"
        )
    return arr


def check_binary(x, name: str, ndim: int | None = None) -> np.ndarray:
    """Validate that every value is exactly 0 or 1."""
    arr = as_float_array(x, name, ndim=ndim)
    if arr.size and not np.all((arr == 0.0) | (arr == 1.0)):
        bad = np.unravel_index(int(np.argmax((arr != 0.0) & (arr != 1.0))), arr.shape)
        raise ValidationError(
            f"{name}: value {arr[bad]!r} at index {tuple(int(i) for i in bad)} is not binary"
        )
    return arr


def check_same_length(pred: np.ndarray, ref: np.ndarray) -> None:
    if pred.shape != ref.shape:
        raise AlignmentError(
            f"prediction and reference shapes differ: {pred.shape} vs {ref.shape}"
        )


def check_threshold(tau: float, name: str = "tau") -> float:
    tau = float(tau)
    if not 0.0 <= tau <= 1.0:
        raise ValidationError(f"{name}: threshold {tau!r} outside [0, 1]")
    return tau

"""Input validation helpers.

Every public entry point funnels its image arguments through
:func:`as_image` so the rest of the code can assume clean 2-D float64
arrays with finite entries.
"""

from __future__ import annotations

import numpy as np

from .errors import ValidationError


def as_image(a, name: str = "image", min_size: int = 1) -> np.ndarray:
    """Coerce ``a`` to a 2-D float64 array and check basic invariants.

    Raises ValidationError if the input is not two-dimensional, is smaller
    than ``min_size`` in either axis, or contains NaN/Inf.
    """
    arr = np.asarray(a, dtype=np.float64)
    if arr.ndim != 2:
        raise ValidationError(f"{name}: expected a 2-D array, got ndim={arr.ndim}")
    h, w = arr.shape
    if h < min_size or w < min_size:
        raise ValidationError(
            f"{name}: dimensions {h}x{w} below the required minimum {min_size}"
        )
    if not np.isfinite(arr).all():
        raise ValidationError(f"{name}: contains non-finite values")
    return arr


def check_same_shape(a: np.ndarray, b: np.ndarray, name_a: str = "reference",
                     name_b: str = "test") -> None:
    if a.shape != b.shape:
        raise ValidationError(
            f"{name_b}: dimensions {b.shape[0]}x{b.shape[1]} do not match "
            f"{name_a} {a.shape[0]}x{a.shape[1]}"
        )


def check_positive_int(value, name: str, minimum: int = 1) -> int:
    """Validate an integer-valued parameter, returning it as a plain int."""
    if not float(value).is_integer():
        raise ValidationError(f"{name}: expected an integer, got {value!r}")
    value = int(value)
    if value < minimum:
        raise ValidationError(f"{name}: must be >= {minimum}, got {value}")
    return value

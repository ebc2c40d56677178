"""Sobel derivatives and the local-gradient edge measure.

The local gradient of a pixel is (|fx| + |fy|) / (2 * sqrt(fx^2 + fy^2)),
which ranges over [0.5, sqrt(2)/2] for any nonzero derivative pair: it is
0.5 when the derivative is axis-aligned and sqrt(2)/2 on the diagonal.
Flat pixels (fx = fy = 0) are assigned the sentinel 0.5, the infimum of
the range, so flat regions get the largest achievable influence during
fusion.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np
from scipy import ndimage

from .validation import as_image

SOBEL_VERTICAL = np.array(
    [[-1.0, -2.0, -1.0], [0.0, 0.0, 0.0], [1.0, 2.0, 1.0]]
)
SOBEL_HORIZONTAL = SOBEL_VERTICAL.T.copy()

# Range of the local-gradient measure; FLAT_GRADIENT doubles as the
# sentinel for pixels with a zero derivative vector.
GRADIENT_MIN = 0.5
GRADIENT_MAX = float(np.sqrt(2.0) / 2.0)
FLAT_GRADIENT = 0.5


class DerivField(NamedTuple):
    """Per-pixel vertical (fx) and horizontal (fy) derivatives."""

    fx: np.ndarray
    fy: np.ndarray


def sobel_derivatives(image) -> DerivField:
    """Correlate with the two 3x3 Sobel masks, replicating edges.

    fx responds to vertical variation (along rows), fy to horizontal
    variation (along columns). Requires at least a 3x3 image.
    """
    img = as_image(image, min_size=3)
    fx = ndimage.correlate(img, SOBEL_VERTICAL, mode="nearest")
    fy = ndimage.correlate(img, SOBEL_HORIZONTAL, mode="nearest")
    return DerivField(fx, fy)


def local_gradient(deriv: DerivField) -> np.ndarray:
    """Map a derivative field to per-pixel local gradients.

    Zero-derivative pixels get FLAT_GRADIENT; all others land in
    [GRADIENT_MIN, GRADIENT_MAX]. The measure is invariant to positive
    scaling of the derivative field.
    """
    fx = np.asarray(deriv[0], dtype=np.float64)
    fy = np.asarray(deriv[1], dtype=np.float64)
    norm = np.hypot(fx, fy)
    flat = norm == 0.0
    num = np.abs(fx) + np.abs(fy)
    g = np.divide(num, 2.0 * norm, out=np.full_like(num, FLAT_GRADIENT), where=~flat)
    return g

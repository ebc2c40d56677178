"""Deterministic synthetic scenes for tests, demos, and benchmarks."""

from __future__ import annotations

import numpy as np

from .validation import check_positive_int


def make_test_scene(size: int = 256) -> np.ndarray:
    """A gray super-resolution test chart, quantized to 8-bit values.

    Most of the frame carries oriented fine gratings (periods around 4 to
    6 pixels, gently chirped) that sit right in the band a 2:1 decimation
    destroys, which is what separates a multi-frame method from
    single-frame upscaling. A bright disk with a dark core, a triangle,
    a soft blob, and a background ramp add edges and smooth regions.
    Deterministic; values are integers in [0, 255] stored as float64.
    """
    size = check_positive_int(size, "size", minimum=32)
    y, x = np.mgrid[0:size, 0:size].astype(np.float64)
    scale = size / 256.0

    img = 95.0 + 40.0 * (y + x) / (2.0 * size)

    # four oriented texture patches, one per quadrant
    patches = (
        ((0.0, 0.5), (0.0, 0.5), 4.4, 45.0),
        ((0.0, 0.5), (0.5, 1.0), 5.6, 135.0),
        ((0.5, 1.0), (0.0, 0.5), 5.2, 130.0),
        ((0.5, 1.0), (0.5, 1.0), 4.8, 40.0),
    )
    for (r0, r1), (c0, c1), period, angle in patches:
        theta = np.deg2rad(angle)
        # period drifts ~8% across the patch so no single frequency dominates
        local_period = (period * scale) * (1.0 + 0.08 * (x - c0 * size) / (size * (c1 - c0)))
        grating = 82.0 * np.sin(
            2.0 * np.pi * (np.cos(theta) * y + np.sin(theta) * x) / local_period
        )
        zone = (y >= r0 * size) & (y < r1 * size) & (x >= c0 * size) & (x < c1 * size)
        img = np.where(zone, 126.0 + grating, img)

    # edge features: disk with dark core, bright triangle
    r = np.hypot(y - 0.5 * size, x - 0.5 * size)
    img = np.where(r < 0.10 * size, 212.0, img)
    img = np.where(r < 0.045 * size, 38.0, img)
    triangle = (x - 0.80 * size > y - 0.86 * size) & (y > 0.86 * size) & (x < 0.97 * size)
    img = np.where(triangle, 225.0, img)

    blob = 55.0 * np.exp(
        -((y - 0.14 * size) ** 2 + (x - 0.85 * size) ** 2) / (2.0 * (0.05 * size) ** 2)
    )
    return np.clip(np.floor(img + blob + 0.5), 0.0, 255.0)

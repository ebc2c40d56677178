"""PSNR and mean-SSIM quality metrics, plus CSV report emission."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from .errors import ValidationError
from .validation import as_image, check_same_shape

PEAK = 255.0
SSIM_WINDOW = 11
SSIM_SIGMA = 1.5
SSIM_C1 = (0.01 * PEAK) ** 2
SSIM_C2 = (0.03 * PEAK) ** 2


def psnr(reference, test, border_exclude: int = 0) -> float:
    """Peak signal-to-noise ratio in dB against the 255 peak.

    ``border_exclude`` trims that many pixels from every side before
    computing the MSE (useful when circular deblurring rings at borders).
    Returns +inf for identical interiors.
    """
    ref = as_image(reference, name="reference")
    tst = as_image(test, name="test")
    check_same_shape(ref, tst)
    b = int(border_exclude)
    if b < 0:
        raise ValidationError(f"border_exclude: must be >= 0, got {b}")
    h, w = ref.shape
    if h - 2 * b < 1 or w - 2 * b < 1:
        raise ValidationError(
            f"border_exclude: {b} leaves no interior for a {h}x{w} image"
        )
    interior = (slice(b, h - b), slice(b, w - b))
    mse = float(np.mean((ref[interior] - tst[interior]) ** 2))
    if mse == 0.0:
        return math.inf
    return 10.0 * math.log10(PEAK**2 / mse)


def _ssim_window() -> np.ndarray:
    r = np.arange(SSIM_WINDOW, dtype=np.float64) - SSIM_WINDOW // 2
    g = np.exp(-(r[:, None] ** 2 + r[None, :] ** 2) / (2.0 * SSIM_SIGMA**2))
    return g / g.sum()


def _local_mean(img: np.ndarray, window: np.ndarray) -> np.ndarray:
    pad = SSIM_WINDOW // 2
    full = ndimage.correlate(img, window, mode="constant")
    return full[pad:-pad, pad:-pad]


def mssim(reference, test) -> float:
    """Mean structural similarity with an 11x11 Gaussian window (sigma 1.5).

    Local statistics are weighted moments over valid windows only (no
    padding contributes). Symmetric in its arguments and 1.0 exactly for
    identical images.
    """
    ref = as_image(reference, name="reference", min_size=SSIM_WINDOW)
    tst = as_image(test, name="test", min_size=SSIM_WINDOW)
    check_same_shape(ref, tst)
    window = _ssim_window()

    mu_x = _local_mean(ref, window)
    mu_y = _local_mean(tst, window)
    var_x = _local_mean(ref * ref, window) - mu_x * mu_x
    var_y = _local_mean(tst * tst, window) - mu_y * mu_y
    cov = _local_mean(ref * tst, window) - mu_x * mu_y

    numerator = (2.0 * (mu_x * mu_y) + SSIM_C1) * (2.0 * cov + SSIM_C2)
    denominator = (mu_x * mu_x + mu_y * mu_y + SSIM_C1) * (var_x + var_y + SSIM_C2)
    return float(np.mean(numerator / denominator))


@dataclass(frozen=True)
class QualityRow:
    image: str
    method: str
    psnr_db: float
    mssim: float


@dataclass(frozen=True)
class QualityReport:
    rows: tuple[QualityRow, ...]

    def to_csv(self) -> str:
        lines = ["image,method,psnr_db,mssim"]
        for row in self.rows:
            p = "inf" if math.isinf(row.psnr_db) else f"{row.psnr_db:.4f}"
            lines.append(f"{row.image},{row.method},{p},{row.mssim:.4f}")
        return "\n".join(lines) + "\n"


def evaluate_pair(reference, test, image: str, method: str,
                  border_exclude: int = 0) -> QualityRow:
    return QualityRow(
        image=image,
        method=method,
        psnr_db=psnr(reference, test, border_exclude),
        mssim=mssim(reference, test),
    )

"""Forward observation simulator: warp, blur, decimate, add noise.

Each low-resolution frame is produced by translating the high-resolution
scene, blurring it with a PSF, point-decimating, and adding white Gaussian
noise at a prescribed blurred-SNR. A frame's motion vector (dx, dy) is the
position of its sampling grid relative to the reference grid, in LR pixel
units: LR pixel (p, q) of a frame shifted by (dx, dy) observes the scene
at reference location (p + dx, q + dy). Equivalently, warp_shift resamples
so that out(i, j) = in(i + dx, j + dy).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import ndimage

from .errors import ValidationError
from .validation import as_image, check_positive_int

WARP_METHODS = ("fourier", "bilinear")


@dataclass(frozen=True)
class MotionVector:
    """Subpixel planar shift (dx vertical, dy horizontal) in LR pixel units."""

    dx: float
    dy: float

    def __post_init__(self):
        if not (math.isfinite(self.dx) and math.isfinite(self.dy)):
            raise ValidationError(f"motion vector components must be finite: {self}")

    def __iter__(self):
        yield self.dx
        yield self.dy

    def is_zero(self) -> bool:
        return self.dx == 0.0 and self.dy == 0.0


def as_motion(mv) -> MotionVector:
    """Coerce a MotionVector or any (dx, dy) pair to a MotionVector."""
    if isinstance(mv, MotionVector):
        return mv
    dx, dy = mv
    return MotionVector(float(dx), float(dy))


@dataclass(frozen=True, eq=False)
class Psf:
    """Odd-sized square blur kernel with nonnegative taps summing to 1."""

    kernel: np.ndarray

    def __post_init__(self):
        k = np.asarray(self.kernel, dtype=np.float64)
        if k.ndim != 2 or k.shape[0] != k.shape[1]:
            raise ValidationError(f"psf kernel must be square, got shape {k.shape}")
        if k.shape[0] % 2 == 0:
            raise ValidationError(f"psf size must be odd, got {k.shape[0]}")
        if not np.isfinite(k).all() or (k < 0).any():
            raise ValidationError("psf taps must be finite and nonnegative")
        if abs(k.sum() - 1.0) > 1e-9:
            raise ValidationError(f"psf taps must sum to 1, got {k.sum()!r}")
        object.__setattr__(self, "kernel", k)

    @property
    def size(self) -> int:
        return self.kernel.shape[0]


def gaussian_psf(size: int, sigma: float) -> Psf:
    """Sampled isotropic Gaussian kernel, normalized to unit sum.

    ``size`` must be odd. Sigmas below 1e-6 degenerate to the identity
    kernel (single unit tap at the center).
    """
    size = check_positive_int(size, "psf size")
    if size % 2 == 0:
        raise ValidationError(f"psf size: must be odd, got {size}")
    if sigma <= 0 and size > 1:
        raise ValidationError(f"psf sigma: must be > 0, got {sigma}")
    kernel = np.zeros((size, size))
    if size == 1 or sigma < 1e-6:
        kernel[size // 2, size // 2] = 1.0
        return Psf(kernel)
    r = np.arange(size, dtype=np.float64) - size // 2
    g = np.exp(-(r[:, None] ** 2 + r[None, :] ** 2) / (2.0 * sigma**2))
    return Psf(g / g.sum())


def identity_psf() -> Psf:
    return gaussian_psf(1, 1.0)


def _fourier_shift(img: np.ndarray, dx: float, dy: float) -> np.ndarray:
    n, m = img.shape
    fu = np.fft.fftfreq(n)
    fv = np.fft.fftfreq(m)
    pu = np.exp(2j * np.pi * fu * dx)
    pv = np.exp(2j * np.pi * fv * dy)
    # Keep the phase ramp conjugate-symmetric: for even sizes the Nyquist
    # bin has no negative-frequency partner, so its factor must be real.
    if n % 2 == 0:
        pu[n // 2] = np.cos(np.pi * dx)
    if m % 2 == 0:
        pv[m // 2] = np.cos(np.pi * dy)
    return np.fft.ifft2(np.fft.fft2(img) * (pu[:, None] * pv[None, :])).real.copy()


def warp_shift(image, shift, method: str = "fourier") -> np.ndarray:
    """Resample an image so that out(i, j) = in(i + dx, j + dy).

    The fourier method applies the circular phase ramp
    exp(+2j*pi*(u*dx/N + v*dy/M)) to the spectrum, which is exact for
    band-limited content; integer shifts reduce to an exact permutation.
    The bilinear method resamples spatially with edge replication.
    """
    img = as_image(image)
    mv = as_motion(shift)
    if method not in WARP_METHODS:
        raise ValidationError(f"warp method: expected one of {WARP_METHODS}, got {method!r}")
    n, m = img.shape
    if abs(mv.dx) >= n / 4 or abs(mv.dy) >= m / 4:
        raise ValidationError(
            f"shift {(mv.dx, mv.dy)} exceeds the quarter-dimension sanity bound "
            f"for a {n}x{m} image"
        )
    if mv.is_zero():
        return img.copy()
    if method == "fourier":
        if mv.dx == int(mv.dx) and mv.dy == int(mv.dy):
            return np.roll(img, (-int(mv.dx), -int(mv.dy)), axis=(0, 1))
        return _fourier_shift(img, mv.dx, mv.dy)
    ii = np.arange(n, dtype=np.float64)[:, None] + mv.dx
    jj = np.arange(m, dtype=np.float64)[None, :] + mv.dy
    coords = np.broadcast_arrays(ii, jj)
    return ndimage.map_coordinates(img, coords, order=1, mode="nearest")


def convolve_psf(image, psf: Psf) -> np.ndarray:
    """2-D correlation with the PSF taps, replicating edges.

    The kernels used here are symmetric, so correlation and convolution
    coincide.
    """
    img = as_image(image)
    return ndimage.correlate(img, psf.kernel, mode="nearest")


def decimate(image, ratio: int) -> np.ndarray:
    """Point-sample every ``ratio``-th pixel: out(i, j) = in(i*ratio, j*ratio)."""
    img = as_image(image)
    ratio = check_positive_int(ratio, "ratio")
    h, w = img.shape
    if h % ratio or w % ratio:
        raise ValidationError(
            f"ratio: {ratio} does not divide image dimensions {h}x{w}"
        )
    return img[::ratio, ::ratio].copy()


def add_noise_bsnr(image, bsnr_db: float | None, seed: int) -> np.ndarray:
    """Add zero-mean white Gaussian noise at the requested blurred-SNR.

    The noise variance is var(image) / 10**(bsnr_db / 10). ``bsnr_db`` of
    None (or +inf) means no noise. Deterministic for a given seed.
    """
    img = as_image(image)
    if bsnr_db is None or math.isinf(bsnr_db):
        return img.copy()
    variance = float(img.var())
    if variance <= 0.0:
        raise ValidationError("image has zero variance; BSNR is undefined")
    sigma = math.sqrt(variance / 10.0 ** (bsnr_db / 10.0))
    rng = np.random.default_rng(seed)
    return img + rng.standard_normal(img.shape) * sigma


@dataclass(frozen=True)
class FrameSpec:
    """Per-frame degradation parameters: true shift and noise level."""

    shift: MotionVector
    bsnr_db: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "shift", as_motion(self.shift))
        if self.bsnr_db is not None:
            object.__setattr__(self, "bsnr_db", float(self.bsnr_db))


@dataclass(frozen=True)
class DegradationConfig:
    """Full forward-model configuration for one simulated sequence."""

    ratio: int
    psf: Psf
    frames: tuple[FrameSpec, ...]
    seed: int = 0
    warp_method: str = "fourier"

    def __post_init__(self):
        object.__setattr__(self, "ratio", check_positive_int(self.ratio, "ratio", minimum=2))
        object.__setattr__(self, "seed", int(self.seed))
        frames = tuple(self.frames)
        if not frames:
            raise ValidationError("frames: at least one frame is required")
        if not frames[0].shift.is_zero():
            raise ValidationError(
                f"frames: first frame is the reference and must have shift (0, 0), "
                f"got {tuple(frames[0].shift)}"
            )
        object.__setattr__(self, "frames", frames)
        if self.warp_method not in WARP_METHODS:
            raise ValidationError(
                f"warp_method: expected one of {WARP_METHODS}, got {self.warp_method!r}"
            )


@dataclass(frozen=True, eq=False)
class LRFrame:
    """One observed low-resolution frame plus its simulation ground truth."""

    image: np.ndarray
    true_shift: MotionVector = field(default_factory=lambda: MotionVector(0.0, 0.0))
    bsnr_db: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "image", as_image(self.image, name="frame"))
        object.__setattr__(self, "true_shift", as_motion(self.true_shift))


def frame_image(frame) -> np.ndarray:
    """Accept an LRFrame or a bare array and return the pixel array."""
    if isinstance(frame, LRFrame):
        return frame.image
    return as_image(frame, name="frame")


def simulate_sequence(hr, config: DegradationConfig) -> list[LRFrame]:
    """Run the forward model over every configured frame.

    Per frame k: warp by (ratio*dx_k, ratio*dy_k) on the HR grid, blur,
    decimate, then add noise with the derived per-frame seed (seed + k).
    The recorded true shift stays in LR pixel units.
    """
    img = as_image(hr, name="hr image")
    h, w = img.shape
    if h % config.ratio or w % config.ratio:
        raise ValidationError(
            f"ratio: {config.ratio} does not divide HR dimensions {h}x{w}"
        )
    frames = []
    for k, spec in enumerate(config.frames):
        hr_shift = MotionVector(config.ratio * spec.shift.dx, config.ratio * spec.shift.dy)
        shifted = warp_shift(img, hr_shift, config.warp_method)
        blurred = convolve_psf(shifted, config.psf)
        lr = decimate(blurred, config.ratio)
        noisy = add_noise_bsnr(lr, spec.bsnr_db, config.seed + k)
        frames.append(LRFrame(noisy, spec.shift, spec.bsnr_db))
    return frames

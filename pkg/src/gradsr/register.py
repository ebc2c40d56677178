"""Frequency-domain subpixel shift estimation.

A pure translation between two frames shows up as a linear phase ramp in
the cross-power spectrum. The estimator first removes the integer part of
the shift (phase-correlation peak), which confines the remaining ramp to
(-pi, pi) over the fitted band, then least-squares fits a plane to the
wrapped phase difference over a central low-frequency band. The sign
convention matches warp_shift: warp_shift(reference, result) ~= moving.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .degrade import LRFrame, MotionVector, as_motion, frame_image
from .errors import LowConfidenceError, ValidationError
from .validation import as_image, check_same_shape

MIN_SIZE = 16
REGISTRATION_MODES = ("estimate", "oracle", "injected")


@dataclass(frozen=True)
class RegistrationParams:
    """Tuning knobs for the phase-plane fit.

    band_fraction: kept band per axis as a fraction of Nyquist.
    magnitude_percentile: cross-power magnitude percentile below which
        coefficients are dropped (their phase is dominated by noise).
    residual_threshold: RMS phase residual (radians) above which the
        estimate is rejected as low-confidence.
    """

    band_fraction: float = 0.5
    magnitude_percentile: float = 25.0
    residual_threshold: float = 1.0

    def __post_init__(self):
        if not 0.0 < self.band_fraction <= 1.0:
            raise ValidationError(
                f"band_fraction: must be in (0, 1], got {self.band_fraction}"
            )
        if not 0.0 <= self.magnitude_percentile < 100.0:
            raise ValidationError(
                f"magnitude_percentile: must be in [0, 100), got {self.magnitude_percentile}"
            )
        if self.residual_threshold <= 0.0:
            raise ValidationError(
                f"residual_threshold: must be > 0, got {self.residual_threshold}"
            )


def _wrap_index(idx: int, n: int) -> int:
    return idx - n if idx > n // 2 else idx


def estimate_shift(reference, moving, params: RegistrationParams | None = None) -> MotionVector:
    """Estimate the (dx, dy) such that moving ~= warp_shift(reference, (dx, dy)).

    Raises LowConfidenceError (carrying the residual and the rejected
    estimate) when the RMS phase residual of the plane fit exceeds the
    configured threshold.
    """
    params = params or RegistrationParams()
    ref = as_image(reference, name="reference", min_size=MIN_SIZE)
    mov = as_image(moving, name="moving", min_size=MIN_SIZE)
    check_same_shape(ref, mov, "reference", "moving")
    if ref.var() == 0.0 or mov.var() == 0.0:
        raise ValidationError("registration inputs must have nonzero variance")

    n, m = ref.shape
    cross = np.fft.fft2(mov) * np.conj(np.fft.fft2(ref))

    # integer prealignment: the normalized cross-power peaks at -shift mod N
    magnitude = np.abs(cross)
    corr = np.fft.ifft2(cross / np.maximum(magnitude, 1e-300))
    peak = np.unravel_index(int(np.argmax(np.abs(corr))), corr.shape)
    d0x = float(-_wrap_index(peak[0], n))
    d0y = float(-_wrap_index(peak[1], m))

    fu = np.fft.fftfreq(n)
    fv = np.fft.fftfreq(m)
    half_band = 0.5 * params.band_fraction
    band = (np.abs(fu)[:, None] < half_band) & (np.abs(fv)[None, :] < half_band)
    band[0, 0] = False

    residual_phase = np.angle(
        cross * np.exp(-2j * np.pi * (fu[:, None] * d0x + fv[None, :] * d0y))
    )
    mag_band = magnitude[band]
    keep = mag_band >= np.percentile(mag_band, params.magnitude_percentile)

    uu = np.broadcast_to(fu[:, None], band.shape)[band][keep]
    vv = np.broadcast_to(fv[None, :], band.shape)[band][keep]
    phases = residual_phase[band][keep]

    design = 2.0 * np.pi * np.column_stack([uu, vv])
    sol, _, _, _ = np.linalg.lstsq(design, phases, rcond=None)
    rms = float(np.sqrt(np.mean((phases - design @ sol) ** 2)))
    shift = MotionVector(d0x + float(sol[0]), d0y + float(sol[1]))
    if rms > params.residual_threshold:
        raise LowConfidenceError(rms, shift)
    return shift


def register_sequence(
    frames,
    mode: str = "estimate",
    injected=None,
    params: RegistrationParams | None = None,
    allow_low_confidence: bool = False,
) -> list[MotionVector]:
    """Determine each frame's position relative to the reference frame.

    Element 0 is always exactly (0, 0). ``mode`` selects how the others
    are obtained: "estimate" runs estimate_shift against frame 0, "oracle"
    copies the simulator's true shifts, and "injected" uses the caller's
    shift list (deliberately erroneous shifts for robustness studies).
    """
    frames = list(frames)
    if not frames:
        raise ValidationError("frames: at least one frame is required")
    if mode not in REGISTRATION_MODES:
        raise ValidationError(
            f"mode: expected one of {REGISTRATION_MODES}, got {mode!r}"
        )

    if mode == "oracle":
        if not all(isinstance(f, LRFrame) for f in frames):
            raise ValidationError("oracle mode needs LRFrame inputs carrying true shifts")
        shifts = [f.true_shift for f in frames]
    elif mode == "injected":
        if injected is None:
            raise ValidationError("injected mode requires a shift list")
        shifts = [as_motion(s) for s in injected]
        if len(shifts) != len(frames):
            raise ValidationError(
                f"injected shifts: got {len(shifts)} for {len(frames)} frames"
            )
    else:
        reference = frame_image(frames[0])
        shifts = [MotionVector(0.0, 0.0)]
        for frame in frames[1:]:
            try:
                shifts.append(estimate_shift(reference, frame_image(frame), params))
            except LowConfidenceError as err:
                if not allow_low_confidence:
                    raise
                shifts.append(err.shift)

    if not shifts[0].is_zero():
        raise ValidationError(
            f"shifts: the reference frame must sit at (0, 0), got {tuple(shifts[0])}"
        )
    return shifts

"""2-D discrete Fourier transform services.

One normalization convention for the whole package: the forward transform
is unnormalized (coefficient (0,0) equals the pixel sum) and the inverse
carries the 1/(N*M) factor, matching numpy.fft. Transform sizes are the
exact image dimensions; nothing here pads.
"""

from __future__ import annotations

import numpy as np

from .errors import NumericError, ValidationError
from .validation import as_image

IMAG_RESIDUE_TOL = 1e-6


def dft2(image) -> np.ndarray:
    """Unnormalized forward 2-D DFT of a real image."""
    img = as_image(image)
    return np.fft.fft2(img)


def idft2(spectrum, check_real: bool = True) -> np.ndarray:
    """Inverse 2-D DFT with 1/(N*M) normalization, returning the real part.

    With ``check_real`` (the default) the caller asserts the spectrum has
    real origin: an imaginary residue above IMAG_RESIDUE_TOL raises
    NumericError instead of being silently discarded.
    """
    spec = np.asarray(spectrum, dtype=np.complex128)
    if spec.ndim != 2:
        raise ValidationError(f"spectrum: expected a 2-D array, got ndim={spec.ndim}")
    if not np.isfinite(spec.view(np.float64)).all():
        raise ValidationError("spectrum: contains non-finite coefficients")
    out = np.fft.ifft2(spec)
    if check_real:
        residue = float(np.abs(out.imag).max())
        if residue >= IMAG_RESIDUE_TOL:
            raise NumericError(
                f"imaginary residue {residue:.3e} exceeds {IMAG_RESIDUE_TOL:.0e}; "
                f"spectrum is not of real origin"
            )
    return np.ascontiguousarray(out.real)

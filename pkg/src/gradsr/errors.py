"""Exception types shared across the package.

The CLI maps these onto exit codes: validation errors exit 2, I/O errors
(plain OSError) exit 3, numeric failures exit 4.
"""


class GradsrError(Exception):
    """Base class for all package-specific errors."""


class ValidationError(GradsrError, ValueError):
    """Bad argument, malformed input, or violated precondition."""


class PgmParseError(ValidationError):
    """Malformed PGM stream. ``field`` names the offending header field."""

    def __init__(self, message: str, field: str):
        super().__init__(f"{field}: {message}")
        self.field = field


class NumericError(GradsrError, ArithmeticError):
    """A numeric computation left its documented operating range."""


class LowConfidenceError(NumericError):
    """Phase-plane fit residual exceeded the confidence threshold.

    Carries the offending RMS residual (radians) and the rejected shift
    estimate so callers may explicitly opt in to using it anyway.
    """

    def __init__(self, residual: float, shift):
        super().__init__(
            f"shift estimate rejected: RMS phase residual {residual:.3f} rad "
            f"exceeds threshold"
        )
        self.residual = residual
        self.shift = shift

"""Multi-frame super-resolution via gradient-weighted adaptive interpolation.

The pipeline fuses several shifted, blurred, decimated, noisy LR frames
into one HR image: frequency-domain registration places every LR pixel on
the HR lattice, a distance- and gradient-weighted interpolation fuses the
scattered samples, and a Wiener filter removes the system blur. A forward
degradation simulator and PSNR/MSSIM metrics round out the experiment
harness.
"""

from .baseline import bilinear_upscale
from .datasets import make_test_scene
from .deblur import WienerParams, blur_circular, nsr_from_bsnr, psf_to_otf, wiener_filter
from .degrade import (
    DegradationConfig,
    FrameSpec,
    LRFrame,
    MotionVector,
    Psf,
    add_noise_bsnr,
    as_motion,
    convolve_psf,
    decimate,
    gaussian_psf,
    identity_psf,
    simulate_sequence,
    warp_shift,
)
from .errors import (
    GradsrError,
    LowConfidenceError,
    NumericError,
    PgmParseError,
    ValidationError,
)
from .estimators import (
    BilinearUpscaler,
    DegradationSimulator,
    SuperResolver,
    WienerDeblurrer,
)
from .fuse import (
    FusionParams,
    HRGrid,
    SamplePoint,
    build_grid,
    distance_weight,
    gradient_weight,
    interpolate_hr,
    nearest_neighbors,
    normalized_magnitude_gradient,
)
from .gradients import (
    DerivField,
    FLAT_GRADIENT,
    GRADIENT_MAX,
    GRADIENT_MIN,
    local_gradient,
    sobel_derivatives,
)
from .manifest import (
    RunManifest,
    default_manifest,
    parse_manifest,
    read_manifest,
    serialize_manifest,
    write_manifest,
)
from .metrics import QualityReport, QualityRow, evaluate_pair, mssim, psnr
from .pgm import load_pgm, read_pgm, save_pgm, write_pgm
from .register import RegistrationParams, estimate_shift, register_sequence
from .spectral import dft2, idft2

__version__ = "0.1.0"

__all__ = [
    "BilinearUpscaler",
    "DegradationConfig",
    "DegradationSimulator",
    "DerivField",
    "FLAT_GRADIENT",
    "FrameSpec",
    "FusionParams",
    "GRADIENT_MAX",
    "GRADIENT_MIN",
    "GradsrError",
    "HRGrid",
    "LRFrame",
    "LowConfidenceError",
    "MotionVector",
    "NumericError",
    "PgmParseError",
    "Psf",
    "QualityReport",
    "QualityRow",
    "RegistrationParams",
    "RunManifest",
    "SamplePoint",
    "SuperResolver",
    "ValidationError",
    "WienerDeblurrer",
    "WienerParams",
    "add_noise_bsnr",
    "as_motion",
    "bilinear_upscale",
    "blur_circular",
    "build_grid",
    "convolve_psf",
    "decimate",
    "default_manifest",
    "dft2",
    "distance_weight",
    "estimate_shift",
    "evaluate_pair",
    "gaussian_psf",
    "gradient_weight",
    "identity_psf",
    "idft2",
    "interpolate_hr",
    "load_pgm",
    "local_gradient",
    "make_test_scene",
    "mssim",
    "nearest_neighbors",
    "normalized_magnitude_gradient",
    "nsr_from_bsnr",
    "parse_manifest",
    "psf_to_otf",
    "psnr",
    "read_manifest",
    "read_pgm",
    "register_sequence",
    "save_pgm",
    "serialize_manifest",
    "simulate_sequence",
    "sobel_derivatives",
    "warp_shift",
    "wiener_filter",
    "write_manifest",
    "write_pgm",
]

"""Scikit-learn style estimators wrapping the functional pipeline.

These follow the usual conventions (``__init__`` stores parameters
verbatim, ``fit`` returns self, fitted state gets a trailing underscore)
so the stages compose with sklearn tooling such as ``clone`` and
``get_params``/``set_params``.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.exceptions import NotFittedError

from .baseline import bilinear_upscale
from .deblur import WienerParams, wiener_filter
from .degrade import (
    DegradationConfig,
    FrameSpec,
    LRFrame,
    frame_image,
    gaussian_psf,
    simulate_sequence,
)
from .errors import ValidationError
from .fuse import FusionParams, build_grid, interpolate_hr
from .register import RegistrationParams, register_sequence
from .validation import as_image


class BilinearUpscaler(BaseEstimator, TransformerMixin):
    """Stateless transformer: bilinear upscaling of a single image."""

    def __init__(self, ratio: int = 2):
        self.ratio = ratio

    def fit(self, X, y=None):
        return self

    def transform(self, X) -> np.ndarray:
        return bilinear_upscale(X, self.ratio)


class WienerDeblurrer(BaseEstimator, TransformerMixin):
    """Stateless transformer: constant-NSR Wiener deconvolution."""

    def __init__(self, psf_size: int = 5, psf_sigma: float = 1.0, nsr: float = 0.05):
        self.psf_size = psf_size
        self.psf_sigma = psf_sigma
        self.nsr = nsr

    def fit(self, X, y=None):
        return self

    def transform(self, X) -> np.ndarray:
        params = WienerParams(gaussian_psf(self.psf_size, self.psf_sigma), self.nsr)
        return wiener_filter(X, params)


class DegradationSimulator(BaseEstimator, TransformerMixin):
    """Forward model as a transformer: one HR image in, LR frames out.

    ``shifts`` and ``bsnr_db`` are per-frame tuples of equal length;
    a bsnr_db entry of None means that frame stays noiseless.
    """

    def __init__(
        self,
        ratio: int = 2,
        shifts: tuple = ((0.0, 0.0), (0.0, -0.8), (-0.8, -0.8), (-0.8, 0.0)),
        bsnr_db: tuple = (30.0, 25.0, 35.0, 30.0),
        psf_size: int = 5,
        psf_sigma: float = 1.0,
        seed: int = 0,
        warp_method: str = "fourier",
    ):
        self.ratio = ratio
        self.shifts = shifts
        self.bsnr_db = bsnr_db
        self.psf_size = psf_size
        self.psf_sigma = psf_sigma
        self.seed = seed
        self.warp_method = warp_method

    def config(self) -> DegradationConfig:
        if len(self.shifts) != len(self.bsnr_db):
            raise ValidationError(
                f"shifts and bsnr_db lengths differ: "
                f"{len(self.shifts)} vs {len(self.bsnr_db)}"
            )
        frames = tuple(
            FrameSpec(shift, bsnr) for shift, bsnr in zip(self.shifts, self.bsnr_db)
        )
        return DegradationConfig(
            ratio=self.ratio,
            psf=gaussian_psf(self.psf_size, self.psf_sigma),
            frames=frames,
            seed=self.seed,
            warp_method=self.warp_method,
        )

    def fit(self, X, y=None):
        return self

    def transform(self, X) -> list[LRFrame]:
        return simulate_sequence(as_image(X, name="hr image"), self.config())


class SuperResolver(BaseEstimator):
    """Multi-frame super-resolution estimator.

    ``fit`` registers the frames against the first one (or adopts the
    shifts passed in, e.g. simulator ground truth); ``transform`` fuses
    the frames onto the HR grid with gradient-adaptive interpolation and
    deblurs the result with a Wiener filter.

    Parameters
    ----------
    ratio : int
        Upscaling factor; LR frames of shape (h, w) produce an
        (h*ratio, w*ratio) image.
    mu, m : float
        Gradient weight parameters of (1 - mu*G)^m.
    k_neighbors, neighbor_window : int
        Fusion neighborhood: how many ranked samples contribute, searched
        in an odd window of HR cells.
    gradient_mode : str
        "orientation" (the scale-invariant local-gradient measure) or
        "normalized_magnitude" (edge-strength variant).
    psf_size, psf_sigma : blur kernel assumed by the Wiener stage.
    nsr : float
        Noise-to-signal power ratio of the Wiener stage.
    band_fraction, magnitude_percentile, residual_threshold :
        Registration tuning; see RegistrationParams.
    allow_low_confidence : bool
        Keep low-confidence shift estimates instead of raising.
    threads : int
        Worker threads for the fusion stage; results are identical for
        any thread count.
    """

    def __init__(
        self,
        ratio: int = 2,
        mu: float = 0.9,
        m: float = 2.0,
        k_neighbors: int = 3,
        neighbor_window: int = 5,
        gradient_mode: str = "orientation",
        psf_size: int = 5,
        psf_sigma: float = 1.0,
        nsr: float = 0.05,
        band_fraction: float = 0.5,
        magnitude_percentile: float = 25.0,
        residual_threshold: float = 1.0,
        allow_low_confidence: bool = False,
        threads: int = 1,
    ):
        self.ratio = ratio
        self.mu = mu
        self.m = m
        self.k_neighbors = k_neighbors
        self.neighbor_window = neighbor_window
        self.gradient_mode = gradient_mode
        self.psf_size = psf_size
        self.psf_sigma = psf_sigma
        self.nsr = nsr
        self.band_fraction = band_fraction
        self.magnitude_percentile = magnitude_percentile
        self.residual_threshold = residual_threshold
        self.allow_low_confidence = allow_low_confidence
        self.threads = threads

    def _fusion_params(self) -> FusionParams:
        return FusionParams(
            mu=self.mu,
            m=self.m,
            neighbor_window=self.neighbor_window,
            k_neighbors=self.k_neighbors,
            gradient_mode=self.gradient_mode,
        )

    def _registration_params(self) -> RegistrationParams:
        return RegistrationParams(
            band_fraction=self.band_fraction,
            magnitude_percentile=self.magnitude_percentile,
            residual_threshold=self.residual_threshold,
        )

    def fit(self, X, y=None, shifts=None):
        """Estimate (or adopt) per-frame shifts relative to frame 0."""
        frames = list(X)
        if shifts is not None:
            self.shifts_ = register_sequence(frames, mode="injected", injected=shifts)
        else:
            self.shifts_ = register_sequence(
                frames,
                mode="estimate",
                params=self._registration_params(),
                allow_low_confidence=self.allow_low_confidence,
            )
        return self

    def transform(self, X) -> np.ndarray:
        """Fuse and deblur the frames using the fitted shifts."""
        if not hasattr(self, "shifts_"):
            raise NotFittedError(
                "this SuperResolver is not fitted yet; call fit before transform"
            )
        frames = [frame_image(f) for f in X]
        if len(frames) != len(self.shifts_):
            raise ValidationError(
                f"got {len(frames)} frames but {len(self.shifts_)} fitted shifts"
            )
        grid = build_grid(frames, self.shifts_, self.ratio, self.gradient_mode)
        fused = interpolate_hr(grid, self.ratio, self._fusion_params(), self.threads)
        params = WienerParams(gaussian_psf(self.psf_size, self.psf_sigma), self.nsr)
        return wiener_filter(fused, params)

    def fit_transform(self, X, y=None, shifts=None) -> np.ndarray:
        return self.fit(X, shifts=shifts).transform(X)

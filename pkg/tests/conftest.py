import numpy as np
import pytest

from gradsr import make_test_scene


@pytest.fixture(scope="session")
def scene256():
    return make_test_scene(256)


@pytest.fixture(scope="session")
def scene128():
    return make_test_scene(128)


@pytest.fixture(scope="session")
def scene64():
    return make_test_scene(64)


def smooth_random_image(shape, seed, cutoff=0.2):
    """Band-limited random image, handy when exact Fourier shifts must be
    interpolation-exact."""
    rng = np.random.default_rng(seed)
    img = rng.standard_normal(shape)
    spec = np.fft.fft2(img)
    fu = np.abs(np.fft.fftfreq(shape[0]))[:, None]
    fv = np.abs(np.fft.fftfreq(shape[1]))[None, :]
    img = np.fft.ifft2(spec * ((fu < cutoff) & (fv < cutoff))).real
    img = (img - img.min()) / (img.max() - img.min() + 1e-12)
    return img * 255.0

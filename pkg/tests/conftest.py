import numpy as np
import pytest

from nftrunc.core import DiscreteSpectrum, TimeSignal, uniform_time_grid
from nftrunc.scattering import SCHEME_SPLIT, ScatterConfig
from nftrunc.synthesis import synthesize

# the four-eigenvalue ladder used throughout the truncation study
SIGMAS = (0.5, 1.0, 1.5, 2.0)


@pytest.fixture(scope="session")
def split_cfg():
    return ScatterConfig(scheme=SCHEME_SPLIT)


@pytest.fixture(scope="session")
def four_soliton():
    """Symmetric 4-soliton with fixed random unimodular b-coefficients."""
    rng = np.random.default_rng(20240317)
    phases = rng.uniform(0.0, 2.0 * np.pi, len(SIGMAS))
    return DiscreteSpectrum(1j * np.asarray(SIGMAS), np.exp(1j * phases))


@pytest.fixture(scope="session")
def four_soliton_signal(four_soliton):
    """The 4-soliton sampled on the default experiment grid (|t| <= 12, 1e4)."""
    return synthesize(four_soliton, uniform_time_grid(12.0, 10000))


time_grid = uniform_time_grid

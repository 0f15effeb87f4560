import numpy as np
import pytest

from qndsim import OscillatorParams


@pytest.fixture
def params():
    """Default millikelvin operating point used across the suite."""
    return OscillatorParams(mass=1e-3, omega1=1e4, tau1=1e4, temperature=0.05)


@pytest.fixture
def rng():
    return np.random.default_rng(20260811)

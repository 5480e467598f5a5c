import numpy as np
import pytest

from hiercompare.model import CrossValMatrix
from hiercompare.synth import equicorrelated_cv

FIXTURES = __import__("pathlib").Path(__file__).parent / "fixtures"


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def small_cv(rng):
    deltas = np.array([0.02, -0.01, 0.005, 0.03, 0.0])
    return CrossValMatrix(equicorrelated_cv(deltas, 0.03, 0.1, 20, rng), 2, 10)

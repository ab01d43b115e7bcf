import math

import numpy as np
import pytest

from varosc import PolynomialPotential

SLOW_ROLL_A = 5.0
SLOW_ROLL_LAMBDA = 0.01
SLOW_ROLL_M_SQ = SLOW_ROLL_LAMBDA * SLOW_ROLL_A**2 / 6.0   # 1/24
SLOW_ROLL_G = SLOW_ROLL_LAMBDA / 24.0                      # 1/2400


@pytest.fixture(scope="session")
def slow_roll() -> PolynomialPotential:
    return PolynomialPotential.double_well(SLOW_ROLL_A, SLOW_ROLL_LAMBDA)


@pytest.fixture(scope="session")
def slow_roll_m_init() -> float:
    return math.sqrt(SLOW_ROLL_M_SQ)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240817)

import random

import pytest
from hypothesis import HealthCheck, settings

from twomode.params import preset_hill_params
from twomode.steady import SolverOptions

settings.register_profile(
    "suite",
    derandomize=True,
    max_examples=60,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("suite")


@pytest.fixture(scope="session")
def preset():
    return preset_hill_params()


@pytest.fixture(scope="session")
def options():
    return SolverOptions()


@pytest.fixture()
def rng():
    return random.Random(0x5EED)

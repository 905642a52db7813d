import random
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings, strategies as st

from soficflow.generate import random_cover
from soficflow.presentation import parse

DATA = Path(__file__).resolve().parent.parent / "data"

settings.register_profile("default", max_examples=120, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("quick", max_examples=25, deadline=None)
settings.load_profile("default")


def load(name):
    return parse((DATA / name).read_text())


@pytest.fixture(scope="session")
def B():
    return load("B.shift")


@pytest.fixture(scope="session")
def C():
    return load("C.shift")


@pytest.fixture(scope="session")
def even():
    return load("even.shift")


# seeds map to valid Fischer covers with at most 6 states and 4 symbols
covers = st.integers(0, 2**32 - 1).map(lambda s: random_cover(random.Random(s)))

import random

import pytest

from dgmodel import PrimeField, Q


@pytest.fixture
def rng():
    return random.Random("tests")


@pytest.fixture(params=["Q", "F5"])
def field(request):
    return Q if request.param == "Q" else PrimeField(5)

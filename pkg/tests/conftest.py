import random
from fractions import Fraction

import pytest

from fourbody.geometry import MassConfig
from fourbody.suites import rand_gauge, rand_interior_point, rand_masses


@pytest.fixture
def rng():
    return random.Random(20240611)


@pytest.fixture
def unit():
    return MassConfig.equal(1)


def draws(n, seed=7):
    r = random.Random(seed)
    return [(rand_masses(r), rand_gauge(r), rand_interior_point(r)) for _ in range(n)]


F = Fraction

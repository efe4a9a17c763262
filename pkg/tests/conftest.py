from fractions import Fraction

import pytest

from slopegap.config import load_config
from slopegap.pipeline import Pipeline
from slopegap.realfield import RealField


@pytest.fixture(scope="session")
def heptagon():
    return load_config("heptagon")


@pytest.fixture(scope="session")
def pentagon():
    return load_config("pentagon")


@pytest.fixture(scope="session")
def field(heptagon):
    return heptagon.field


@pytest.fixture(scope="session")
def pipeline(heptagon):
    return Pipeline(heptagon)


@pytest.fixture(scope="session")
def records(pipeline):
    return pipeline.records


@pytest.fixture(scope="session")
def dist(pipeline):
    return pipeline.distribution


@pytest.fixture(scope="session")
def sqrt2():
    return RealField([-2, 0, 1], (Fraction(1), Fraction(2)), name="Q(sqrt2)")

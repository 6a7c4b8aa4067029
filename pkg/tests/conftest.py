import pytest

from adaseries.targets import (MarginalLaw, density_f1, density_f2, uniform_density)


@pytest.fixture(scope="session")
def law_f1():
    return MarginalLaw(density_f1())


@pytest.fixture(scope="session")
def law_f2():
    return MarginalLaw(density_f2())


@pytest.fixture(scope="session")
def law_uniform():
    return MarginalLaw(uniform_density())

import pytest

from syllarc.articulator import load_calibration
from syllarc.inventory import load_inventory
from syllarc.tract import load_tract_model


@pytest.fixture(scope="session")
def inventory():
    return load_inventory()


@pytest.fixture(scope="session")
def calibration():
    return load_calibration()


@pytest.fixture(scope="session")
def tract():
    return load_tract_model()

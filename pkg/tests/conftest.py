import pytest

from rfi_coexist import derive_geometry, load_scenario


@pytest.fixture(scope="session")
def default_scenario():
    return load_scenario()


@pytest.fixture(scope="session")
def default_geometry(default_scenario):
    return derive_geometry(default_scenario)

import pytest

from rmcover import orbit_enumerate


@pytest.fixture(scope="session")
def sub112():
    return orbit_enumerate(1, 1, 2)


@pytest.fixture(scope="session")
def sub123():
    return orbit_enumerate(1, 2, 3)


@pytest.fixture(scope="session")
def sub124():
    return orbit_enumerate(1, 2, 4)


@pytest.fixture(scope="session")
def sub224():
    return orbit_enumerate(2, 2, 4)


@pytest.fixture(scope="session")
def oracle223():
    return orbit_enumerate(2, 2, 3)


@pytest.fixture(scope="session")
def oracle234():
    return orbit_enumerate(2, 3, 4)


@pytest.fixture(scope="session")
def oracle335():
    return orbit_enumerate(3, 3, 5)

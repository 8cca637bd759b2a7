import pytest

from someqec import build_lattice


@pytest.fixture(scope="session")
def lat3():
    return build_lattice(3)


@pytest.fixture(scope="session")
def lat5():
    return build_lattice(5)


@pytest.fixture(scope="session")
def lat9():
    return build_lattice(9)


@pytest.fixture(scope="session")
def lat13():
    return build_lattice(13)

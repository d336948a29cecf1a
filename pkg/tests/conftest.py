import pytest

from sievebound.combiner import get_tables


@pytest.fixture(scope="session")
def tables():
    return get_tables()


@pytest.fixture(scope="session")
def semi(tables):
    return tables.semi


@pytest.fixture(scope="session")
def lin(tables):
    return tables.linear

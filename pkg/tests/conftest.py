import pytest

from phimin.sieve import build_sieve


@pytest.fixture(scope="session")
def tables():
    return build_sieve(3000)


@pytest.fixture(scope="session")
def tables10k():
    return build_sieve(10_000)


@pytest.fixture(scope="session")
def tables200k():
    return build_sieve(200_000)

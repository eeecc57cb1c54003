import pytest

from gbv import build_sieve


@pytest.fixture(scope="session")
def tables():
    """Shared sieve covering every test that stays below two million."""
    return build_sieve(2_000_000)


@pytest.fixture(scope="session")
def small_tables():
    return build_sieve(10_000)

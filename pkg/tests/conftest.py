import os

import pytest

from friable.primes import sieve_primes


@pytest.fixture(scope="session", autouse=True)
def isolated_cache(tmp_path_factory):
    """Point the disk cache at a temp dir so tests never touch a real one."""
    d = tmp_path_factory.mktemp("friable-cache")
    old = os.environ.get("FRIABLE_CACHE_DIR")
    os.environ["FRIABLE_CACHE_DIR"] = str(d)
    yield str(d)
    if old is None:
        os.environ.pop("FRIABLE_CACHE_DIR", None)
    else:
        os.environ["FRIABLE_CACHE_DIR"] = old


@pytest.fixture(scope="session")
def table_1e4():
    return sieve_primes(10**4)


@pytest.fixture(scope="session")
def table_1e6():
    return sieve_primes(10**6)

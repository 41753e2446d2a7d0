import pytest

from affine_ttt import geometry


@pytest.fixture(scope="session")
def index_cache():
    """Shared enumeration cache so test modules do not rebuild incidence."""
    cache = {}

    def get(m, n, q):
        key = (m, n, q)
        if key not in cache:
            cache[key] = geometry.enumerate_subspaces(m, n, q)
        return cache[key]

    return get

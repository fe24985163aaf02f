import pytest

from quadtables import RuleCache


@pytest.fixture(scope="session")
def shared_cache():
    """One cache for every test that builds rules at n <= 32, so each
    (kernel, precision) recurrence table is computed once per run."""
    return RuleCache(min_degree=33)

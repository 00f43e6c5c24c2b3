import pytest

from nleig import SolverOptions, alpha_critical


@pytest.fixture(scope="session")
def crit():
    """Session cache for critical-coupling searches (the slowest computations)."""
    cache = {}

    def get(q, tol=0.04):
        key = (q, tol)
        if key not in cache:
            cache[key] = alpha_critical(q, tol, SolverOptions())
        return cache[key]

    return get

import math

import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

settings.register_profile("default", max_examples=150, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

S = 1 / math.sqrt(2)

# moderate magnitudes: the identities under test are exact, the slack is relative
finite = st.floats(min_value=-1e3, max_value=1e3, allow_nan=False, allow_infinity=False)
entries = st.builds(complex, finite, finite)


def vectors(dim=None, min_dim=1, max_dim=6, nonzero=True):
    dims = st.just(dim) if dim is not None else st.integers(min_dim, max_dim)
    strat = dims.flatmap(lambda n: st.lists(entries, min_size=n, max_size=n))
    if nonzero:
        strat = strat.filter(lambda v: any(abs(c) > 1e-3 for c in v))
    return strat


def same_dim(k, nonzero=True, max_dim=6):
    return st.integers(1, max_dim).flatmap(
        lambda n: st.tuples(*[vectors(n, nonzero=nonzero) for _ in range(k)]))


@pytest.fixture
def rng():
    return np.random.default_rng(20160513)


def gaussian(rng, shape, real=False):
    out = rng.standard_normal(shape) + 0j
    if not real:
        out += 1j * rng.standard_normal(shape)
    return out


# ------------------------------------------------------- acceptance lines

_LINES = []


def record(line: str) -> None:
    _LINES.append(line)
    print(line)


def pytest_terminal_summary(terminalreporter):
    if _LINES:
        terminalreporter.section("acceptance criteria")
        for line in _LINES:
            terminalreporter.write_line(line)

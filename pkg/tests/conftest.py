import numpy as np
import pytest

from tracelab import make_field, tau_table


@pytest.fixture(scope="session")
def f5():
    return make_field(5)


@pytest.fixture(scope="session")
def f7():
    return make_field(7)


@pytest.fixture(scope="session")
def f13():
    return make_field(13)


@pytest.fixture(scope="session")
def f31():
    return make_field(31)


@pytest.fixture(scope="session")
def f101():
    return make_field(101)


@pytest.fixture(scope="session")
def gl2_small():
    """Exact rank-2 table to 2000; enough for the unit tests."""
    return tau_table(2000)


def random_tracefn(f, rng):
    from tracelab import TraceFn
    vals = rng.standard_normal(f.p) + 1j * rng.standard_normal(f.p)
    return TraceFn(f, vals, label="random")


@pytest.fixture
def rng():
    return np.random.default_rng(12345)

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from metaplectic_modp.arith import padic_field

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture(scope="session")
def F3():
    return padic_field(3, 1, 24)


@pytest.fixture(scope="session")
def F5():
    return padic_field(5, 1, 24)


@pytest.fixture(scope="session")
def F9():
    return padic_field(3, 2, 24)


FIELD_PARAMS = [(3, 1), (5, 1), (7, 1), (3, 2)]


@pytest.fixture(scope="session", params=FIELD_PARAMS, ids=lambda pf: f"p{pf[0]}f{pf[1]}")
def field(request):
    p, f = request.param
    return padic_field(p, f, 24)


def elements(F, vmin=-3, vmax=3, digits=3, nonzero=True):
    """Strategy for elements u p^v with a random unit u given by its first digits."""
    unit = st.tuples(st.integers(1, F.q - 1), st.lists(st.integers(0, F.q - 1), min_size=digits - 1,
                                                       max_size=digits - 1))
    nz = st.builds(lambda u, v: F.from_digits([u[0]] + u[1], v), unit, st.integers(vmin, vmax))
    return nz if nonzero else st.one_of(st.just(F.zero()), nz)


def units(F, digits=3):
    return elements(F, 0, 0, digits)


def integral(F, vmax=3, digits=3):
    return elements(F, 0, vmax, digits, nonzero=False)

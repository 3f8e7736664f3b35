from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings
from mpmath.libmp import to_rational

settings.register_profile("default", max_examples=200, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


def iv_ends(x) -> tuple:
    """Exact rational endpoints of an mpmath interval."""
    return tuple(Fraction(*to_rational(v)) for v in x._mpi_)


def iv_of(x: Fraction, ctx):
    return ctx.mpf(x.numerator) / x.denominator


@pytest.fixture
def oracle():
    from mpmath import iv

    old = iv.prec
    iv.prec = 200
    yield iv
    iv.prec = old

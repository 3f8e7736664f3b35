from fractions import Fraction as F

import pytest

from roundtaylor import reference as ref
from roundtaylor.interval import Box
from roundtaylor.lemmas import (STATED_CONSTANTS, ceil_to, derive_constants, hull_of,
                                outward_box, verify_all, verify_g_ranges, verify_f_bounds)


@pytest.fixture(scope="module")
def reports():
    return verify_all()


def test_stated_constants_verified(reports):
    for rep in reports:
        assert rep.passed, (rep.title, [c.name for c in rep.failures()])


def test_g9_upper_end_is_informational(reports):
    fb = reports[1]
    info = {c.name: c for c in fb.info}
    slip = info["g9 = -3 - 3 w2 w4 upper"]
    assert not slip.holds
    assert -F(29964, 10**4) < slip.lhs < -F(29963, 10**4)
    assert fb.passed


def test_frobenius_reading(reports):
    names = {c.name: c for c in reports[2].checks}
    assert names["sum b_ij^2"].holds
    assert names["Frobenius upper bound <= K0"].holds


def test_point_box_passes():
    mid = Box.from_bounds([(F(14, 10), F(14, 10)), (F(6, 10), F(6, 10)), (F(2), F(2))])
    assert verify_g_ranges(mid).passed
    assert verify_f_bounds(mid).passed


def test_wider_box_fails_on_named_constant():
    wide = ref.U2.with_axis(1, ref.U2[1].hull(F(2, 5)))
    rep = verify_g_ranges(wide)
    assert not rep.passed
    assert any(c.name.startswith("g5") or c.name.startswith("g6") for c in rep.failures())


def test_derive_constants_on_stated_box():
    consts, rep = derive_constants(ref.U1, ref.EPS)
    assert rep.passed
    for got, stated in zip(consts.f_bounds, ref.F_BOUNDS):
        assert got <= stated + F(1, 10**4)
    assert consts.K0 <= ref.K0 + F(1, 10**4)
    assert consts.M0 == max(consts.f_bounds)
    assert consts.u2 == ref.U2
    assert STATED_CONSTANTS.bound_set().K == (ref.K0,)


def test_box_helpers():
    assert ceil_to(F(1234, 1000), F(1, 100)) == F(124, 100)
    assert ceil_to(F(-1234, 1000), F(1, 100)) == F(-123, 100)
    b = outward_box(Box.from_bounds([(F(12345, 10**4), F(12355, 10**4))]))
    assert b[0].lo == F(1234, 1000) and b[0].hi == F(1236, 1000)
    h = hull_of([Box.from_bounds([(0, 1)]), Box.from_bounds([(-1, F(1, 2))])])
    assert h[0].lo == -1 and h[0].hi == 1

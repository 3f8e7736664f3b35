import random
from fractions import Fraction as F

import mpmath
import pytest

from conftest import iv_ends, iv_of
from roundtaylor import reference as ref
from roundtaylor.enclosure import PoleProximityError, PrecisionRequest
from roundtaylor.fields import (FIELDS, LOGISTIC, cmc_box_terms, cmc_f_enclose, cmc_field,
                                get_field, logistic_demo_field, logistic_exact_solution,
                                polynomial_field, taylor_coefficients)
from roundtaylor.interval import Box, RationalInterval as I
from roundtaylor.rtm import euler_unrounded

PI_HALF_GRID = F(15707963267, 10**10)
PI_GRID = F(31415926535, 10**10)


def f_oracle(u, iv):
    r, th, al = (iv_of(F(c), iv) for c in u)
    return (iv.cos(al), iv.sin(al) / iv.sin(r),
            2 * iv.cot(2 * th) * iv.cos(al) / iv.sin(r) - 3 * iv.cot(r) * iv.sin(al) - 3)


def overlaps(enc, value):
    lo, hi = iv_ends(value)
    return not (hi < enc.lo or lo > enc.hi)


def test_step_zero_evaluation(oracle):
    u = (PI_HALF_GRID, F(5204, 10**4), PI_GRID)
    f = cmc_f_enclose(u)
    for enc, val in zip(f, f_oracle(u, oracle)):
        assert overlaps(enc, val)
        assert enc.width < F(1, 10**20)
    assert abs(f[0].mid + 1) < F(1, 10**9)
    assert abs(f[1].mid) < F(1, 10**9)
    assert F(-42, 10) < f[2].mid < F(-41, 10)


def test_cos_alpha_near_zero_and_quarter_pi(oracle):
    u = (F(14, 10), F(7854, 10**4), F(15708, 10**4))
    f = cmc_f_enclose(u)
    assert f[0].lo < F(1, 10**4) and f[0].hi > -F(1, 10**4)
    for enc, val in zip(f, f_oracle(u, oracle)):
        assert overlaps(enc, val)
    u = (F(13, 10), F(785398163397, 10**12), F(2))
    f = cmc_f_enclose(u)
    expect = -3 * mpmath.cot(mpmath.mpf("1.3")) * mpmath.sin(2) - 3
    assert abs(float(f[2].mid) - float(expect)) < 1e-9


def test_pole_proximity():
    with pytest.raises(PoleProximityError):
        cmc_f_enclose((F(0), F(1, 2), F(1)), prec=40)


def test_point_inside_box_evaluation():
    rng = random.Random(3)
    terms = cmc_box_terms(ref.U2, PrecisionRequest(F(1, 10**12)))
    for _ in range(1000):
        u = [a.lo + a.width * F(rng.randint(0, 10**6), 10**6) for a in ref.U1]
        for enc, rng_f in zip(cmc_f_enclose(u, prec=64), terms["f"]):
            assert rng_f.contains(enc)


def _jacobian_point(u, prec=80):
    from roundtaylor.fields import cmc_g_point, cmc_jacobian_from_g
    from roundtaylor.enclosure import sincos_ball

    g = list(cmc_g_point(u, prec))
    s2, _ = sincos_ball(2 * F(u[1]), prec)
    g.append((1 / s2) * (1 / s2))
    jac = cmc_jacobian_from_g(*g)
    return [[e.to_interval() if hasattr(e, "to_interval") else I.point(e) for e in row]
            for row in jac]


def test_jacobian_finite_difference():
    def f(u):
        r, th, al = (mpmath.mpf(x) for x in u)
        return [mpmath.cos(al), mpmath.sin(al) / mpmath.sin(r),
                2 * mpmath.cot(2 * th) * mpmath.cos(al) / mpmath.sin(r)
                - 3 * mpmath.cot(r) * mpmath.sin(al) - 3]

    mpmath.mp.dps = 40
    try:
        u = (F(14, 10), F(6, 10), F(2))
        jac = _jacobian_point(u)
        step = mpmath.mpf("1e-15")
        for j in range(3):
            up = list(map(mpmath.mpf, (float(x) for x in u)))
            dn = list(up)
            up[j] += step
            dn[j] -= step
            col = [(a - b) / (2 * step) for a, b in zip(f(up), f(dn))]
            for i in range(3):
                assert abs(float(jac[i][j].mid) - float(col[i])) < 1e-8, (i, j)
    finally:
        mpmath.mp.dps = 15


def test_F1_bounds_at_random_points():
    rng = random.Random(11)
    for _ in range(200):
        u = [a.lo + a.width * F(rng.randint(0, 10**6), 10**6) for a in ref.U2]
        jac = _jacobian_point(u)
        f = cmc_f_enclose(u, prec=80)
        for i in range(3):
            F1 = sum((jac[i][j] * f[j] for j in range(3)), I(0, 0))
            assert F1.mag <= ref.M_COMPONENTS[i]


def test_logistic_examples():
    fld = logistic_demo_field()
    assert fld.exact_rational
    assert fld.enclose_f([F(1, 2)])[0].lo == F(5, 12)
    assert fld.enclose_f([F(0)])[0].lo == 0
    assert euler_unrounded(lambda y: y - y * y / 3, F(1, 2), F(1, 100), 1) == F(121, 240)


def test_logistic_tower_and_box_terms():
    # F1 = f' f = (1 - 2y/3)(y - y^2/3)
    y = F(2, 5)
    assert LOGISTIC.eval_term(1, y) == (1 - 2 * y / 3) * (y - y * y / 3)
    terms = LOGISTIC.box_terms(Box.from_bounds([(F(1, 2), 1)]), None, order=1)
    for k in range(11):
        p = F(1, 2) + F(k, 20)
        assert LOGISTIC.eval_term(0, p) in terms["F"][0]
        assert LOGISTIC.eval_term(1, p) in terms["F"][1]
        assert LOGISTIC.eval_term_deriv(0, p) in terms["DF"][0]


def test_logistic_closed_form_solves_ode():
    y = logistic_exact_solution(F(1, 2))
    t = mpmath.mpf("0.7")
    d = mpmath.diff(y, t)
    assert abs(d - (y(t) - y(t) ** 2 / 3)) < 1e-12
    assert abs(y(0) - mpmath.mpf(1) / 2) < 1e-15


def test_registry():
    assert set(FIELDS) == {"cmc-s4", "logistic-demo"}
    assert get_field("cmc-s4").dim == 3 and not cmc_field().exact_rational
    with pytest.raises(KeyError):
        get_field("nope")
    p = polynomial_field("zero", [0])
    assert p.enclose_f([F(3)])[0].lo == 0


def test_taylor_coefficients():
    assert taylor_coefficients(F(1, 10), 3) == [F(1, 10), F(1, 200), F(1, 6000)]

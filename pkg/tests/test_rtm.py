from fractions import Fraction as F

import mpmath
import pytest

from roundtaylor import reference as ref
from roundtaylor.exact import GridSpec, TEN_DECIMALS
from roundtaylor.fields import (LOGISTIC, cmc_field, logistic_demo_field,
                                logistic_exact_solution, polynomial_field)
from roundtaylor.interval import Box
from roundtaylor.rtm import (BoundSet, BoxViolation, ConfigError, RTMConfig, SizeLimitExceeded,
                             compute_error_bound, euler_unrounded, initial_component,
                             pi_multiple, rtm_run, rtm_step, write_trajectory_csv)

NO_ROUND = GridSpec(F(0))


def logistic(y):
    return y - y * y / 3


def test_logistic_single_step():
    cfg = RTMConfig(logistic_demo_field(), F(1, 100), 1, NO_ROUND, (F(1, 2),))
    assert rtm_run(cfg).final == (F(121, 240),)


def test_unrounded_logistic_matches_stated_rational_at_step_four():
    assert euler_unrounded(logistic, F(1, 2), F(1, 100), 4) == ref.EULER_QUOTED
    cfg = RTMConfig(logistic_demo_field(), F(1, 100), 4, NO_ROUND, (F(1, 2),))
    assert rtm_run(cfg).final == (ref.EULER_QUOTED,)


def test_unrounded_sequence_increases_past_stated_value():
    y = F(1, 2)
    seq = []
    for _ in range(6):
        y = y + F(1, 100) * logistic(y)
        seq.append(y)
    assert all(a < b for a, b in zip(seq, seq[1:]))
    assert seq[4] > ref.EULER_QUOTED


def test_size_limit():
    cfg = RTMConfig(logistic_demo_field(), F(1, 100), 30, NO_ROUND, (F(1, 2),))
    with pytest.raises(SizeLimitExceeded) as e:
        rtm_run(cfg, record=False, max_bits=4096)
    assert e.value.step < 30


def test_rounded_logistic_stays_on_grid_and_below():
    grid = GridSpec(F(1, 10**6))
    cfg = RTMConfig(logistic_demo_field(), F(1, 100), 30, grid, (F(1, 2),))
    traj = rtm_run(cfg)
    exact = euler_unrounded(logistic, F(1, 2), F(1, 100), 3)
    z3 = traj.points[3][0]
    assert (z3 * 10**6).denominator == 1
    assert 0 <= exact - z3 < 3 * F(1, 10**6)


def test_zero_field_and_zero_steps():
    zero = polynomial_field("zero", [0])
    cfg = RTMConfig(zero, F(1, 10), 5, TEN_DECIMALS, (F(1, 3),))
    traj = rtm_run(cfg)
    assert traj.final == traj.z0 == (F(3333333333, 10**10),)
    assert traj.monotone(0) == "nondecreasing"
    cfg0 = RTMConfig(cmc_field(), F(1, 100), 0, TEN_DECIMALS, ("pi/2", F(5204, 10**4), "pi"))
    t = rtm_run(cfg0)
    assert t.final == t.z0 and len(t) == 1


def test_config_errors():
    with pytest.raises(ConfigError):
        RTMConfig(cmc_field(), F(1, 100), 3, NO_ROUND, (1, 1, 1))
    with pytest.raises(ConfigError):
        RTMConfig(logistic_demo_field(), F(0), 3, TEN_DECIMALS, (1,))
    with pytest.raises(ConfigError):
        RTMConfig(logistic_demo_field(), F(1), -1, TEN_DECIMALS, (1,))
    with pytest.raises(ConfigError):
        RTMConfig(logistic_demo_field(), F(1), 1, TEN_DECIMALS, (1, 2))
    with pytest.raises(ConfigError):
        RTMConfig(cmc_field(), F(1), 1, TEN_DECIMALS, (1, 1, 1), order=2)


def test_pi_initial_values():
    assert pi_multiple("pi/2") == F(1, 2)
    assert pi_multiple("-3*pi/4") == F(-3, 4)
    assert pi_multiple("1.5") is None
    z, dev = initial_component("pi", TEN_DECIMALS)
    assert z == F(31415926535, 10**10)
    assert float(mpmath.pi) - float(z) < 1e-10
    assert initial_component("pi/2", TEN_DECIMALS)[0] == F(15707963267, 10**10)
    with pytest.raises(ConfigError):
        initial_component("pi", NO_ROUND)


def test_fast_and_generic_paths_agree():
    cfg = RTMConfig(cmc_field(), F(3966, 10**4) / 25000, 1, TEN_DECIMALS,
                    ("pi/2", F(5204, 10**4), "pi"))
    z = rtm_run(cfg).z0
    for _ in range(30):
        a, _ = rtm_step(z, cfg, fast=True)
        b, _ = rtm_step(z, cfg, fast=False)
        assert a == b
        z = a


def test_box_violation():
    cfg = RTMConfig(cmc_field(), F(3966, 10**4) / 25000, 3, TEN_DECIMALS,
                    ("pi/2", F(5204, 10**4), "pi"))
    with pytest.raises(BoxViolation) as e:
        rtm_run(cfg, box=ref.U1)
    assert e.value.step == 0
    t = rtm_run(cfg, box=ref.U1, fail_on_box=False)
    assert t.box_violation[:2] == (0, 1)


def test_first_table_rows(tmp_path):
    a = F(5204, 10**4)
    cfg = RTMConfig(cmc_field(), ref.T_LO / ref.STEPS, ref.STEPS, TEN_DECIMALS, ("pi/2", a, "pi"))
    traj = rtm_run(cfg, record=False)
    assert traj.final == ref.table(ref.TABLE_T1)[0]


def test_csv_output(tmp_path):
    cfg = RTMConfig(logistic_demo_field(), F(1, 100), 3, GridSpec(F(1, 1000)), (F(1, 2),))
    traj = rtm_run(cfg)
    p = tmp_path / "t.csv"
    write_trajectory_csv(traj, p)
    lines = p.read_text().splitlines()
    assert lines[0] == "step,t,u1" and len(lines) == 5


# --- error bound ---------------------------------------------------------------

def logistic_bounds(u1: Box, eps: F) -> BoundSet:
    terms = LOGISTIC.box_terms(u1.inflate(eps), None, order=1)
    return BoundSet(M0=terms["F"][0].mag, M_components=(terms["F"][1].mag,),
                    K=(terms["DF"][0].mag,), eps=eps)


def test_error_bound_trivial_cases():
    b = BoundSet(M0=1, M_components=(1, 1, 1), K=(2,), eps=F(1, 10))
    assert compute_error_bound(b, F(1, 100), 0, 3, F(1, 10**10)).R_tilde == 0
    eb = compute_error_bound(b, F(1, 100), 10, 3, F(0))
    assert eb.rounding_term == 0 and eb.R_tilde > 0
    with pytest.raises(ValueError):
        compute_error_bound(b, F(1, 100), 10, 3, F(0), order=2)


def test_halving_h_halves_truncation_term():
    b = BoundSet(M0=1, M_components=(3, 4), K=(F(3, 2),), eps=F(1, 10))
    e1 = compute_error_bound(b, F(1, 50), 10, 2, F(0))
    e2 = compute_error_bound(b, F(1, 100), 20, 2, F(0))
    assert e1.truncation_term == 2 * e2.truncation_term
    assert e1.L == e2.L == F(3, 2)


def test_stated_error_bound_values():
    b = BoundSet(M0=ref.M0, M_components=ref.M_COMPONENTS, K=(ref.K0,), eps=ref.EPS)
    lo = compute_error_bound(b, ref.T_LO / ref.STEPS, ref.STEPS, 3, ref.RESOLUTION)
    hi = compute_error_bound(b, ref.T_HI / ref.STEPS, ref.STEPS, 3, ref.RESOLUTION)
    assert F(29757, 10**8) < lo.R_tilde < F(29758, 10**8)
    assert F(30468, 10**8) < hi.R_tilde < ref.R_TILDE_CLAIM
    assert hi.hypothesis_holds


@pytest.mark.parametrize("h,resolution", [(F(1, 100), F(1, 10**6)), (F(1, 50), F(1, 10**4)),
                                          (F(1, 200), F(1, 10**8))])
def test_error_bound_dominates_true_error(h, resolution):
    y0 = F(1, 2)
    k = int(1 / h)
    bounds = logistic_bounds(Box.from_bounds([(F(1, 2), F(11, 10))]), F(1, 10))
    eb = compute_error_bound(bounds, h, k, 1, resolution)
    cfg = RTMConfig(logistic_demo_field(), h, k, GridSpec(resolution), (y0,))
    traj = rtm_run(cfg)
    exact = logistic_exact_solution(y0)
    mpmath.mp.dps = 40
    try:
        worst = max(abs(mpmath.mpf(p[0].numerator) / p[0].denominator - exact(i * h))
                    for i, p in enumerate(traj.points))
    finally:
        mpmath.mp.dps = 15
    assert worst <= mpmath.mpf(eb.R_tilde.numerator) / eb.R_tilde.denominator
    assert worst > 0

import json
from fractions import Fraction as F

import pytest

from roundtaylor import reference as ref
from roundtaylor.interval import RationalInterval as I
from roundtaylor.proof import (EdgeVerdict, MarginCheck, MirandaRectangle, ProofConfig,
                               alpha_edge_check, gronwall_bound, margin_summary, miranda_conclude,
                               run_full_proof, run_trajectories, theta_edge_check, theta_window)

DA = F(2, 1000) / 15


def test_gronwall_against_stated_claims():
    lo = gronwall_bound(DA, ref.K0, ref.T_LO)
    hi = gronwall_bound(DA, ref.K0, ref.T_HI)
    assert F(19971, 10**7) < lo < ref.GRONWALL_CLAIM["t_lo"]
    assert F(20314, 10**7) < hi < ref.GRONWALL_CLAIM["t_hi"]


def test_gronwall_trivial_cases():
    assert gronwall_bound(0, 5, 1) == 0
    assert gronwall_bound(F(1, 3), 0, 7) == F(1, 3)
    assert gronwall_bound(F(1, 3), 2, 0) == F(1, 3)
    with pytest.raises(ValueError):
        gronwall_bound(-1, 1, 1)


def test_theta_window_index():
    h = ref.T_HI / ref.STEPS
    i0 = theta_window(ref.T_LO, h)
    assert i0 == ref.THETA_WINDOW_START
    assert i0 * h <= ref.T_LO < (i0 + 1) * h


def _verdicts(signs):
    layout = [("t_lo", "F", 1), ("t_hi", "F", -1), ("a_lo", "G", -1), ("a_hi", "G", 1)]
    return [EdgeVerdict(e, fn, req, F(s), F(s)) for (e, fn, req), s in zip(layout, signs)]


def test_miranda_toy_rectangle():
    rect = MirandaRectangle(F(0), F(1), F(0), F(1))
    ok = miranda_conclude(_verdicts([1, -1, -1, 1]), rect)
    assert ok.exists and not ok.reasons
    bad = miranda_conclude(_verdicts([1, 1, -1, 1]), rect)
    assert not bad.exists and bad.reasons == ["t_hi edge sign violated"]
    missing = miranda_conclude(_verdicts([1, -1, -1, 1])[:3], rect)
    assert missing.reasons == ["a_hi edge missing"]
    with pytest.raises(ValueError):
        MirandaRectangle(F(1), F(1), F(0), F(1))


def test_margin_check_direction():
    half_pi = I(F(15707963267948966, 10**16), F(15707963267948967, 10**16))
    near = MarginCheck("x", half_pi.hi + F(1, 10**6), half_pi, "above", F(264, 10**5))
    assert not near.holds
    far = MarginCheck("x", half_pi.lo - F(3, 1000), half_pi, "below", F(264, 10**5))
    assert far.holds and far.achieved == F(3, 1000)


def test_alpha_edge_ordering_and_chain():
    half_pi = I(F(157, 100), F(157, 100))
    vals = [F(158, 100), F(159, 100), F(1585, 1000)]
    rep = alpha_edge_check(vals, "t_lo", "above", F(1, 1000), {"R~": F(1, 10**4)}, half_pi)
    names = [c.name for c in rep.report.failures()]
    assert names == ["ordering alpha~(a_1) < alpha~(a_2)"]
    rep = alpha_edge_check(vals[:2], "t_lo", "above", F(1, 1000), {"R~": F(2, 1000)}, half_pi)
    assert not rep.passed


def test_theta_edge_monotonicity_is_checked():
    h = F(1, 10)
    theta = [F(0), F(1), F(2), F(2), F(3)]
    rep = theta_edge_check(theta, "a_lo", "below", F(1, 10), h, F(2, 10), F(1, 10**5),
                           {"R~": F(1, 100)}, I(F(10), F(10)))
    failed = [c.name for c in rep.report.failures()]
    assert failed == ["theta~_i strictly increasing for i = 1..4"]
    assert rep.report.data["window_start"] == 2
    assert rep.margins[0].value == 3


@pytest.fixture(scope="module")
def small():
    cfg = ProofConfig(steps=250, samples=2)
    return cfg, run_trajectories(cfg)


def test_small_config_runs_and_skips_tables(small):
    cfg, runs = small
    cert = run_full_proof(cfg, runs)
    assert not cfg.is_reference
    assert cert.sections["tables"]["compared"] is False
    assert list(cert.sections) == ["config", "lemmas", "tables", "error_bounds", "gronwall",
                                   "margins", "miranda", "box_audit", "notes", "verdict"]
    assert len(margin_summary(cert)) == 4


def test_tiny_eps_violates_hypothesis(small):
    cfg, runs = small
    cert = run_full_proof(ProofConfig(steps=250, samples=2, eps=F(1, 10**6)), runs)
    assert not cert.passed
    assert any("hypothesis eps > M0 h + R~" in r for r in cert.sections["verdict"]["reasons"])


def test_certificate_is_deterministic(small, tmp_path):
    cfg, runs = small
    a = run_full_proof(cfg, runs).to_json()
    b = run_full_proof(ProofConfig(steps=250, samples=2), run_trajectories(cfg)).to_json()
    assert a == b
    p = tmp_path / "c.json"
    run_full_proof(cfg, runs).write(p)
    assert json.loads(p.read_text())["config"]["sha256"] == cfg.digest()


def test_workers_do_not_change_digest():
    assert ProofConfig(workers=4).digest() == ProofConfig().digest()
    assert ProofConfig(box_policy="stated").digest() != ProofConfig().digest()


def test_config_validation():
    for kw in ({"steps": 0}, {"samples": 1}, {"box_policy": "x"}, {"eps": 0},
               {"a_lo": F(1), "a_hi": F(1, 2)}, {"workers": 0}):
        with pytest.raises(ValueError):
            ProofConfig(**kw)
    cfg = ProofConfig()
    assert cfg.is_reference and cfg.active_eps == F(3, 1000)
    assert ProofConfig(box_policy="stated").active_eps == ref.EPS
    pts = cfg.sample_points()
    assert len(pts) == 16 and pts[0] == ref.A_LO and pts[-1] == ref.A_HI
    assert cfg.half_spacing == DA


@pytest.mark.slow
def test_mid_length_run_skips_table():
    cfg = ProofConfig(steps=2500, samples=2)
    cert = run_full_proof(cfg)
    assert "skipped_reason" in cert.sections["tables"]

"""End-to-end existence certificate for the CMC hypertorus profile curve.

The pipeline integrates 16 initial angles a_j to two horizons t_lo < t_hi,
bounds the distance between computed and true solutions (RTM error bound,
Gronwall spread between neighbouring a, initial rounding), and checks the
four sign conditions of a Poincare-Miranda argument for

    F(a, t) = alpha(a, t) - pi/2,    G(a, t) = theta(a, t) - pi/4

on the rectangle [a_lo, a_hi] x [t_lo, t_hi].

Two box policies are supported.  ``stated`` uses the stated box U1 and the
stated constants.  ``repaired`` (the default) takes U1 to be the hull of all
computed trajectories rounded outward, and re-derives every constant over
that box; the stated constants are still verified over their own box.
"""

from __future__ import annotations

import hashlib
import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from . import reference as ref
from .checks import Report
from .enclosure import PrecisionRequest, enclose_exp, enclose_pi
from .exact import GridSpec, decimal_preview, format_rational, format_vector
from .fields import cmc_field
from .interval import Box, RationalInterval, sqrt_upper
from .lemmas import (STATED_CONSTANTS, LemmaConstants, derive_constants, hull_of, outward_box,
                     verify_all)
from .rtm import RTMConfig, compute_error_bound, rtm_run

WORKERS_ENV = "ROUNDTAYLOR_WORKERS"
EXP_REQUEST = PrecisionRequest(Fraction(1, 10**20))
PI_REQUEST = PrecisionRequest(Fraction(1, 10**18))
PI_WIDTH_LIMIT = Fraction(1, 10**15)
Z0_CORRECTION_LIMIT = Fraction(3, 10**9)
BOX_POLICIES = ("repaired", "stated")
REPAIR_EPS = Fraction(3, 1000)
REPAIR_QUANTUM = Fraction(1, 1000)


def default_workers() -> int:
    try:
        return max(1, int(os.environ.get(WORKERS_ENV, "1")))
    except ValueError:
        return 1


def exp_upper(x: Fraction) -> Fraction:
    return enclose_exp(Fraction(x), EXP_REQUEST).hi


def gronwall_bound(delta0, K, t) -> Fraction:
    """Rational upper bound on ``delta0 * exp(K t)``."""
    delta0, K, t = Fraction(delta0), Fraction(K), Fraction(t)
    if delta0 < 0 or K < 0 or t < 0:
        raise ValueError("gronwall_bound needs delta0, K, t >= 0")
    if delta0 == 0:
        return Fraction(0)
    if K == 0 or t == 0:
        return delta0
    return delta0 * exp_upper(K * t)


# --- configuration ---------------------------------------------------------------

@dataclass(frozen=True)
class ProofConfig:
    steps: int = ref.STEPS
    resolution: Fraction = ref.RESOLUTION
    a_lo: Fraction = ref.A_LO
    a_hi: Fraction = ref.A_HI
    t_lo: Fraction = ref.T_LO
    t_hi: Fraction = ref.T_HI
    samples: int = ref.N_SAMPLES
    box_policy: str = "repaired"
    eps: Optional[Fraction] = None  # inflation U1 -> U2; policy default when None
    workers: int = 1

    def __post_init__(self) -> None:
        for name in ("resolution", "a_lo", "a_hi", "t_lo", "t_hi"):
            object.__setattr__(self, name, Fraction(getattr(self, name)))
        if self.eps is not None:
            object.__setattr__(self, "eps", Fraction(self.eps))
        if self.steps < 1:
            raise ValueError("steps must be >= 1")
        if self.samples < 2:
            raise ValueError("need at least two samples in a")
        if not (self.a_lo < self.a_hi and 0 < self.t_lo < self.t_hi):
            raise ValueError("need a_lo < a_hi and 0 < t_lo < t_hi")
        if self.resolution <= 0:
            raise ValueError("resolution must be > 0")
        if self.box_policy not in BOX_POLICIES:
            raise ValueError(f"box policy must be one of {BOX_POLICIES}")
        if self.eps is not None and self.eps <= 0:
            raise ValueError("eps must be > 0")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")

    @property
    def active_eps(self) -> Fraction:
        if self.eps is not None:
            return self.eps
        return ref.EPS if self.box_policy == "stated" else REPAIR_EPS

    @property
    def h_lo(self) -> Fraction:
        return self.t_lo / self.steps

    @property
    def h_hi(self) -> Fraction:
        return self.t_hi / self.steps

    def sample_points(self) -> list:
        step = (self.a_hi - self.a_lo) / (self.samples - 1)
        return [self.a_lo + j * step for j in range(self.samples)]

    @property
    def half_spacing(self) -> Fraction:
        return (self.a_hi - self.a_lo) / (2 * (self.samples - 1))

    @property
    def is_reference(self) -> bool:
        return (self.steps, self.resolution, self.a_lo, self.a_hi, self.t_lo, self.t_hi,
                self.samples) == (ref.STEPS, ref.RESOLUTION, ref.A_LO, ref.A_HI, ref.T_LO,
                                  ref.T_HI, ref.N_SAMPLES)

    def to_json(self) -> dict:
        out = {}
        for k, v in asdict(self).items():
            if k == "workers":  # does not affect results
                continue
            out[k] = format_rational(v) if isinstance(v, Fraction) else v
        out["eps"] = format_rational(self.active_eps)
        return out

    def digest(self) -> str:
        blob = json.dumps(self.to_json(), sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()


# --- trajectories ----------------------------------------------------------------

@dataclass
class RunResult:
    j: int
    a: Fraction
    h: Fraction
    z0: tuple
    initial_deviation: tuple
    final: tuple
    hull: Box
    monotone: tuple
    stated_box_violation: Optional[tuple]
    theta: Optional[list] = None


def _run_one(job: tuple) -> RunResult:
    j, a, h, steps, resolution, keep_theta = job
    cfg = RTMConfig(field=cmc_field(), h=h, k=steps, grid=GridSpec(resolution),
                    y0=("pi/2", a, "pi"))
    traj = rtm_run(cfg, box=ref.U1, record=keep_theta, fail_on_box=False)
    return RunResult(
        j=j, a=a, h=h, z0=traj.z0, initial_deviation=traj.initial_deviation, final=traj.final,
        hull=traj.hull, monotone=tuple(traj.monotone(i) for i in range(3)),
        stated_box_violation=traj.box_violation,
        theta=traj.series(1) if keep_theta else None,
    )


def run_trajectories(cfg: ProofConfig) -> dict:
    """All 2 x samples runs; returns ``{"t_lo": [...], "t_hi": [...]}`` ordered by j.

    The theta series is kept for the two corner runs on the t_hi grid.
    """
    a = cfg.sample_points()
    last = cfg.samples - 1
    jobs = [(j, a[j], cfg.h_lo, cfg.steps, cfg.resolution, False) for j in range(cfg.samples)]
    jobs += [(j, a[j], cfg.h_hi, cfg.steps, cfg.resolution, j in (0, last))
             for j in range(cfg.samples)]
    if cfg.workers > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            results = list(pool.map(_run_one, jobs))
    else:
        results = [_run_one(job) for job in jobs]
    return {"t_lo": results[:cfg.samples], "t_hi": results[cfg.samples:]}


# --- margins and edges -------------------------------------------------------------

@dataclass(frozen=True)
class MarginCheck:
    """Distance of a computed value from a target, compared with a required margin.

    ``direction`` says on which side of the target the value must sit.  The
    achieved distance is measured against the far end of the target enclosure.
    """

    quantity: str
    value: Fraction
    target: RationalInterval
    direction: str  # "above" | "below"
    required: Fraction

    @property
    def achieved(self) -> Fraction:
        if self.direction == "above":
            return self.value - self.target.hi
        return self.target.lo - self.value

    @property
    def holds(self) -> bool:
        return self.achieved > self.required

    def to_json(self) -> dict:
        return {
            "quantity": self.quantity,
            "value": format_rational(self.value),
            "target": [format_rational(self.target.lo), format_rational(self.target.hi)],
            "direction": self.direction,
            "required": format_rational(self.required),
            "achieved": format_rational(self.achieved),
            "slack": format_rational(self.achieved - self.required),
            "holds": self.holds,
            "approx (non-exact)": {"achieved": decimal_preview(self.achieved, 10),
                                   "slack": decimal_preview(self.achieved - self.required, 10)},
        }


@dataclass
class EdgeReport:
    name: str
    margins: list = field(default_factory=list)
    report: Report = None

    def __post_init__(self) -> None:
        if self.report is None:
            self.report = Report(self.name)

    @property
    def checks(self) -> list:
        return self.report.checks

    @property
    def passed(self) -> bool:
        return all(m.holds for m in self.margins) and self.report.passed

    def failures(self) -> list:
        out = [f"{m.quantity}: distance {decimal_preview(m.achieved, 8)} <= "
               f"{decimal_preview(m.required, 8)}" for m in self.margins if not m.holds]
        return out + [f"{self.name}: {c.name}" for c in self.report.failures()]

    def to_json(self) -> dict:
        return {"margins": [m.to_json() for m in self.margins], **self.report.to_json()}


def alpha_edge_check(values: Sequence[Fraction], t_label: str, direction: str,
                     required: Fraction, error_terms: dict, target: RationalInterval,
                     claim_terms: Optional[dict] = None) -> EdgeReport:
    """alpha~(a_j) against pi/2 on one time edge.

    ``error_terms`` are the rigorous distances between alpha~(a_j) and the true
    alpha(a, t) for every a within half a sample spacing of a_j; the required
    margin must exceed their sum.  ``claim_terms`` repeats the chain with the
    stated numbers.  The stated strict ordering in j is checked exactly.
    """
    rep = EdgeReport(f"alpha edge t = {t_label}")
    for j, v in enumerate(values):
        rep.margins.append(MarginCheck(f"alpha~(a_{j}, {t_label})", v, target, direction, required))
    total = sum(error_terms.values(), Fraction(0))
    rep.report.add("required margin > " + " + ".join(error_terms), required, ">", total)
    if claim_terms:
        rep.report.add("stated chain: margin > " + " + ".join(claim_terms), required, ">",
                       sum(claim_terms.values(), Fraction(0)))
    for j in range(len(values) - 1):
        rep.report.add(f"ordering alpha~(a_{j}) < alpha~(a_{j + 1})", values[j], "<", values[j + 1])
    if direction == "above":
        rep.report.add("pi/2 < alpha~(a_0)", target.hi, "<", values[0])
    else:
        rep.report.add("alpha~(a_last) < pi/2", values[-1], "<", target.lo)
    rep.report.data["error_total"] = total
    return rep


def theta_window(t_lo: Fraction, h: Fraction) -> int:
    """Largest i with i h <= t_lo."""
    return (Fraction(t_lo) / Fraction(h)).__floor__()


def theta_edge_check(theta: Sequence[Fraction], a_label: str, direction: str, required: Fraction,
                     h: Fraction, t_lo: Fraction, f2_bound: Fraction, error_terms: dict,
                     target: RationalInterval, claim_terms: Optional[dict] = None) -> EdgeReport:
    """theta(a, t) against pi/4 for all t in [t_lo, k h] on one a edge.

    Every such t is within h/2 of some grid time i h with i in the window
    [floor(t_lo / h), k], so |theta(t) - theta(i h)| <= sup|f2| h / 2.  The
    extreme of theta~ over the window is taken directly; monotonicity is
    attested separately.
    """
    k = len(theta) - 1
    i0 = theta_window(t_lo, h)
    rep = EdgeReport(f"theta edge a = {a_label}")
    r = rep.report
    r.add(f"window start: {i0} h <= t_lo", i0 * h, "<=", t_lo)
    r.add(f"window start: t_lo < {i0 + 1} h", t_lo, "<", (i0 + 1) * h)
    interp = f2_bound * h / 2
    r.add("interpolation sup|f2| h / 2 < stated 0.00001", interp, "<", ref.INTERPOLATION_CLAIM)
    window = theta[i0:]
    if direction == "below":
        idx = max(range(len(window)), key=window.__getitem__) + i0
    else:
        idx = min(range(len(window)), key=window.__getitem__) + i0
    rep.margins.append(MarginCheck(f"theta~_{idx}({a_label}) (window extreme)", theta[idx],
                                   target, direction, required))
    terms = dict(error_terms, interpolation=interp)
    total = sum(terms.values(), Fraction(0))
    r.add("required margin > " + " + ".join(terms), required, ">", total)
    if claim_terms:
        r.add("stated chain: margin > " + " + ".join(claim_terms), required, ">",
              sum(claim_terms.values(), Fraction(0)))
    strict = sum(1 for i in range(1, k) if theta[i] < theta[i + 1])
    r.add(f"theta~_i strictly increasing for i = 1..{k}", strict, "==", k - 1)
    weak = sum(1 for i in range(k) if theta[i] <= theta[i + 1])
    r.add(f"theta~_i nondecreasing for i = 0..{k}", weak, "==", k)
    r.data.update(window_start=i0, extreme_index=idx, interpolation=interp, error_total=total)
    return rep


@dataclass(frozen=True)
class EdgeVerdict:
    """Rigorous bound [lower, upper] of one Miranda function on one rectangle edge."""

    edge: str  # "t_lo" | "t_hi" | "a_lo" | "a_hi"
    function: str  # "F" | "G"
    required_sign: int  # +1 or -1
    lower: Fraction
    upper: Fraction

    @property
    def holds(self) -> bool:
        return self.lower > 0 if self.required_sign > 0 else self.upper < 0

    def to_json(self) -> dict:
        return {"edge": self.edge, "function": self.function,
                "required_sign": "+" if self.required_sign > 0 else "-",
                "bound": [format_rational(self.lower), format_rational(self.upper)],
                "holds": self.holds}


MIRANDA_LAYOUT = {"t_lo": ("F", 1), "t_hi": ("F", -1), "a_lo": ("G", -1), "a_hi": ("G", 1)}


@dataclass(frozen=True)
class MirandaRectangle:
    a_lo: Fraction
    a_hi: Fraction
    t_lo: Fraction
    t_hi: Fraction

    def __post_init__(self) -> None:
        if not (self.a_lo < self.a_hi and self.t_lo < self.t_hi):
            raise ValueError("degenerate rectangle")


@dataclass
class MirandaResult:
    exists: bool
    reasons: list
    edges: list

    def to_json(self) -> dict:
        return {"exists": self.exists, "reasons": self.reasons,
                "edges": [e.to_json() for e in self.edges],
                "identification": {"F": "alpha - pi/2", "G": "theta - pi/4"}}


def miranda_conclude(edges: Sequence[EdgeVerdict], rect: MirandaRectangle) -> MirandaResult:
    """Poincare-Miranda: F > 0 on t = t_lo, F < 0 on t = t_hi, G < 0 on a = a_lo,
    G > 0 on a = a_hi imply F = G = 0 somewhere in the rectangle.
    """
    by_edge = {e.edge: e for e in edges}
    reasons = []
    for name, (fn, sign) in MIRANDA_LAYOUT.items():
        e = by_edge.get(name)
        if e is None:
            reasons.append(f"{name} edge missing")
        elif (e.function, e.required_sign) != (fn, sign):
            reasons.append(f"{name} edge must check {fn} with sign {'+' if sign > 0 else '-'}")
        elif not e.holds:
            reasons.append(f"{name} edge sign violated")
    return MirandaResult(not reasons, reasons, [by_edge[k] for k in MIRANDA_LAYOUT if k in by_edge])


# --- full pipeline ---------------------------------------------------------------------

STATIC_NOTES = (
    "M is taken as a rigorous upper bound of sqrt(M1^2 + M2^2 + M3^2) = sqrt(286.9361) = 16.93919; "
    "the stated value 16.9424 is slightly larger, either way R~ < 0.0003048",
    "time interpolation for theta uses sup|f2| (< 1.033), since theta' = f2",
    "theta edges are checked for every t in [t_lo, t_hi] = [0.3966, 0.3991]",
    "initial state (pi/2, a_j, pi) is rounded down to the grid; the deviation is propagated with "
    "exp(K0 T) and added to every chain",
    "membership z_j in U1 is checked at every step rather than inferred from monotonicity",
)


def _json_box(box: Box) -> list:
    return [[format_rational(a.lo), format_rational(a.hi)] for a in box]


def _z0_correction(runs: Sequence[RunResult], K0: Fraction, T: Fraction) -> Fraction:
    worst = max(sum((d * d for d in r.initial_deviation), Fraction(0)) for r in runs)
    return sqrt_upper(worst, Fraction(1, 10**15)) * exp_upper(K0 * T)


@dataclass
class ProofCertificate:
    sections: dict

    @property
    def passed(self) -> bool:
        return self.sections["verdict"]["pass"]

    def to_json(self) -> str:
        return json.dumps(self.sections, indent=2, sort_keys=False) + "\n"

    def write(self, path) -> None:
        with open(path, "w") as fh:
            fh.write(self.to_json())


def run_full_proof(cfg: ProofConfig = ProofConfig(), runs: Optional[dict] = None) -> ProofCertificate:
    """Run every check and assemble the certificate.

    ``runs`` may carry precomputed trajectories (as from ``run_trajectories``)
    so callers can re-evaluate policies without integrating again.
    """
    gating: list[tuple[str, object]] = []  # (section, Report | EdgeReport)
    notes = list(STATIC_NOTES)
    sections: dict = {"config": dict(cfg.to_json(), sha256=cfg.digest())}

    # stated constants over the stated box
    lemma_reports = verify_all()
    for rep in lemma_reports:
        gating.append(("lemmas", rep))
        notes.extend(rep.notes)
    sections["lemmas"] = [rep.to_json() for rep in lemma_reports]

    runs = runs or run_trajectories(cfg)
    lo_runs, hi_runs = runs["t_lo"], runs["t_hi"]
    all_runs = lo_runs + hi_runs
    h = {"t_lo": cfg.h_lo, "t_hi": cfg.h_hi}
    T = {"t_lo": cfg.t_lo, "t_hi": cfg.t_hi}

    # tables
    tables = {"compared": cfg.is_reference,
              "t_lo": [format_vector(r.final) for r in lo_runs],
              "t_hi": [format_vector(r.final) for r in hi_runs]}
    if cfg.is_reference:
        trep = Report("tables: endpoint rationals")
        for label, rows, res in (("t_lo", ref.table(ref.TABLE_T1), lo_runs),
                                 ("t_hi", ref.table(ref.TABLE_T2), hi_runs)):
            for r, row in zip(res, rows):
                for c, name in enumerate(("r", "theta", "alpha")):
                    trep.add(f"{name}~(a_{r.j}, {label})", r.final[c], "==", row[c])
        matches = sum(c.holds for c in trep.checks)
        tables.update(matches=matches, total=len(trep.checks), report=trep.to_json())
        gating.append(("tables", trep))
    else:
        tables["skipped_reason"] = "configuration differs from the reference run"
        notes.append("table comparison skipped: non-reference configuration")
    sections["tables"] = tables

    # box policy
    hull = hull_of([r.hull for r in all_runs])
    violations = [(lab, r.j, r.stated_box_violation) for lab, res in runs.items() for r in res
                  if r.stated_box_violation is not None]
    audit = {
        "policy": cfg.box_policy,
        "trajectory_hull": _json_box(hull),
        "stated_U1": _json_box(ref.U1),
        "stated_U1_violations": [
            {"run": f"{lab} a_{j}", "step": v[0], "coord": ("r", "theta", "alpha")[v[1]],
             "value": format_rational(v[2])} for lab, j, v in violations],
        "monotone": {f"{lab} a_{r.j}": list(r.monotone) for lab, res in runs.items() for r in res},
    }
    if violations:
        notes.append(f"{len(violations)} of {len(all_runs)} trajectories leave the stated U1 "
                     "(see box_audit)")
    nonmono = sorted({("r", "theta", "alpha")[i] for r in all_runs
                      for i, m in enumerate(r.monotone) if m == "none"})
    if nonmono:
        notes.append(f"not every coordinate sequence is monotone ({', '.join(nonmono)}); "
                     "membership in U1 is checked directly")
    brep = Report("box: trajectories inside U1")
    if cfg.box_policy == "stated":
        consts = STATED_CONSTANTS if cfg.eps is None else LemmaConstants(
            **{**STATED_CONSTANTS.__dict__, "eps": cfg.eps, "source": "stated, eps override"})
        brep.add("runs leaving the stated U1", len(violations), "==", 0)
    else:
        u1 = outward_box(hull, REPAIR_QUANTUM)
        consts, drep = derive_constants(u1, cfg.active_eps)
        gating.append(("box_audit", drep))
        audit["derived_report"] = drep.to_json()
        for i, name in enumerate(("r", "theta", "alpha")):
            brep.add(f"hull {name} lower inside U1", hull[i].lo, ">=", u1[i].lo)
            brep.add(f"hull {name} upper inside U1", hull[i].hi, "<=", u1[i].hi)
    gating.append(("box_audit", brep))
    audit["active_constants"] = consts.to_json()
    audit["report"] = brep.to_json()
    sections["box_audit"] = audit

    # error bounds
    erep = Report("error bounds")
    bounds = {}
    for label in ("t_lo", "t_hi"):
        eb = compute_error_bound(consts.bound_set(), h[label], cfg.steps, 3, cfg.resolution)
        bounds[label] = eb
        erep.add(f"hypothesis eps > M0 h + R~ ({label})", consts.eps, ">", eb.hypothesis_rhs)
        stated = compute_error_bound(STATED_CONSTANTS.bound_set(), h[label], cfg.steps, 3,
                                     cfg.resolution)
        bounds[f"stated_{label}"] = stated
        erep.add(f"stated constants: R~ < 0.0003048 ({label})", stated.R_tilde, "<",
                 ref.R_TILDE_CLAIM)
        erep.add(f"stated constants: eps > M0 h + R~ ({label})", STATED_CONSTANTS.eps, ">",
                 stated.hypothesis_rhs)
    erep.add_info("stated M = 16.9424 >= computed M", ref.M_STATED, ">=",
                  bounds["stated_t_hi"].M, "the stated M is a valid, looser upper bound")
    gating.append(("error_bounds", erep))
    sections["error_bounds"] = {
        "active": {k: bounds[k].to_json() for k in ("t_lo", "t_hi")},
        "stated_constants": {k: bounds[f"stated_{k}"].to_json() for k in ("t_lo", "t_hi")},
        "report": erep.to_json(),
    }

    # Gronwall spread and initial rounding
    grep = Report("gronwall and initial rounding")
    delta0 = cfg.half_spacing
    G = {lab: gronwall_bound(delta0, consts.K0, T[lab]) for lab in T}
    G_stated = {lab: gronwall_bound(delta0, ref.K0, T[lab]) for lab in T}
    for lab in T:
        grep.add(f"stated K0: Gronwall bound < stated ({lab})", G_stated[lab], "<",
                 ref.GRONWALL_CLAIM[lab])
    z0c = {lab: _z0_correction(runs[lab], consts.K0, T[lab]) for lab in T}
    for lab in T:
        grep.add(f"z0 rounding correction < 3e-9 ({lab})", z0c[lab], "<", Z0_CORRECTION_LIMIT)
        grep.add(f"neighbour solutions stay in U2: eps > M0 h + R~ + z0 + Gronwall ({lab})",
                 consts.eps, ">",
                 bounds[lab].hypothesis_rhs + z0c[lab] + G[lab])
    a = cfg.sample_points()
    grep.add("samples cover [a_lo, a_hi]: a_0 - da <= a_lo", a[0] - delta0, "<=", cfg.a_lo)
    grep.add("samples cover [a_lo, a_hi]: a_last + da >= a_hi", a[-1] + delta0, ">=", cfg.a_hi)
    grep.add("sample spacing == 2 da", a[1] - a[0], "==", 2 * delta0)
    gating.append(("gronwall", grep))
    sections["gronwall"] = {
        "delta0": format_rational(delta0),
        "K0": format_rational(consts.K0),
        "bound": {lab: format_rational(G[lab]) for lab in T},
        "bound_stated_K0": {lab: format_rational(G_stated[lab]) for lab in T},
        "z0_correction": {lab: format_rational(z0c[lab]) for lab in T},
        "report": grep.to_json(),
    }

    # margins
    pi = enclose_pi(PI_REQUEST)
    pi_rep = Report("pi enclosure")
    pi_rep.add("pi enclosure width <= 1e-15", pi.width, "<=", PI_WIDTH_LIMIT)
    gating.append(("margins", pi_rep))
    half_pi, quarter_pi = pi * Fraction(1, 2), pi * Fraction(1, 4)
    edges = {}
    for lab, direction, key in (("t_lo", "above", "alpha_t_lo"), ("t_hi", "below", "alpha_t_hi")):
        terms = {"R~": bounds[lab].R_tilde, "Gronwall": G[lab], "z0": z0c[lab]}
        claims = {"0.0003048": ref.R_TILDE_CLAIM, str(ref.GRONWALL_CLAIM[lab]): ref.GRONWALL_CLAIM[lab]}
        edges[lab] = alpha_edge_check([r.final[2] for r in runs[lab]], lab, direction,
                                      ref.MARGINS[key], terms, half_pi, claims)
    theta_claims = {"0.0003048": ref.R_TILDE_CLAIM, "0.00001": ref.INTERPOLATION_CLAIM}
    for lab, run, direction, key in (("a_lo", hi_runs[0], "below", "theta_a_lo"),
                                     ("a_hi", hi_runs[-1], "above", "theta_a_hi")):
        terms = {"R~": bounds["t_hi"].R_tilde, "z0": z0c["t_hi"]}
        edges[lab] = theta_edge_check(run.theta, lab, direction, ref.MARGINS[key], cfg.h_hi,
                                      cfg.t_lo, consts.f_bounds[1], terms, quarter_pi,
                                      theta_claims)
    if cfg.is_reference:
        e = edges["a_hi"].report
        e.add("window start index == 24843", e.data["window_start"], "==", ref.THETA_WINDOW_START)
        e.add("theta~_24843(a_hi) == 7857740589/10^10", hi_runs[-1].theta[ref.THETA_WINDOW_START],
              "==", ref.THETA_24843_A_HI)
        e.add("theta~_24843(a_hi) > pi/4", hi_runs[-1].theta[ref.THETA_WINDOW_START], ">",
              quarter_pi.hi)
    for e in edges.values():
        gating.append(("margins", e))
    sections["margins"] = {
        "pi": [format_rational(pi.lo), format_rational(pi.hi)],
        "alpha_t_lo": edges["t_lo"].to_json(),
        "alpha_t_hi": edges["t_hi"].to_json(),
        "theta_a_lo": edges["a_lo"].to_json(),
        "theta_a_hi": edges["a_hi"].to_json(),
    }

    # Miranda: bounds of F and G on each edge, from the worst sample
    verdicts = []
    for lab, sign in (("t_lo", 1), ("t_hi", -1)):
        err = edges[lab].report.data["error_total"]
        vals = [r.final[2] for r in runs[lab]]
        verdicts.append(EdgeVerdict(lab, "F", sign, min(vals) - err - half_pi.hi,
                                    max(vals) + err - half_pi.lo))
    for lab, sign in (("a_lo", -1), ("a_hi", 1)):
        data = edges[lab].report.data
        run = hi_runs[0] if lab == "a_lo" else hi_runs[-1]
        window = run.theta[data["window_start"]:]
        err = data["error_total"]
        verdicts.append(EdgeVerdict(lab, "G", sign, min(window) - err - quarter_pi.hi,
                                    max(window) + err - quarter_pi.lo))
    rect = MirandaRectangle(cfg.a_lo, cfg.a_hi, cfg.t_lo, cfg.t_hi)
    miranda = miranda_conclude(verdicts, rect)
    sections["miranda"] = dict(miranda.to_json(), rectangle={
        "a": [format_rational(cfg.a_lo), format_rational(cfg.a_hi)],
        "t": [format_rational(cfg.t_lo), format_rational(cfg.t_hi)]})

    # verdict
    reasons = []
    for section, rep in gating:
        for fail in rep.failures():
            reasons.append(f"{section}: {fail if isinstance(fail, str) else rep.name + ': ' + fail.name}")
    reasons += [f"miranda: {r}" for r in miranda.reasons]
    sections["notes"] = notes
    sections["verdict"] = {"pass": not reasons, "reasons": reasons,
                           "checks": sum(len(rep.checks) + len(getattr(rep, "margins", []))
                                         for _, rep in gating)}
    order = ("config", "lemmas", "tables", "error_bounds", "gronwall", "margins", "miranda",
             "box_audit", "notes", "verdict")
    return ProofCertificate({k: sections[k] for k in order})


def margin_summary(cert: ProofCertificate) -> list:
    """Rows (family, quantity, achieved, required, slack, ok) for display."""
    rows = []
    for fam in ("alpha_t_lo", "alpha_t_hi", "theta_a_lo", "theta_a_hi"):
        margins = cert.sections["margins"][fam]["margins"]
        worst = min(margins, key=lambda m: Fraction(m["slack"]))
        rows.append((fam, worst["quantity"], worst["approx (non-exact)"]["achieved"],
                     decimal_preview(Fraction(worst["required"]), 10),
                     worst["approx (non-exact)"]["slack"],
                     all(m["holds"] for m in margins)))
    return rows

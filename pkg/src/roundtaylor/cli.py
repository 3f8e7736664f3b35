"""Command line entry point.

Exit codes: 0 success / proof passed, 1 proof or verification failed,
2 usage or configuration error.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from fractions import Fraction
from pathlib import Path
from typing import Optional, Sequence

from . import reference as ref
from .enclosure import EnclosureError
from .exact import GridSpec, decimal_preview, format_rational, parse_rational
from .fields import FIELDS, get_field
from .interval import Box, RationalInterval
from .rtm import ConfigError, RTMConfig, SizeLimitExceeded, rtm_run, write_trajectory_csv

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _rational(text) -> Fraction:
    try:
        return parse_rational(text)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _load_config(path: Optional[str]) -> dict:
    if not path:
        return {}
    try:
        with open(path) as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from None
    if not isinstance(data, dict):
        raise UsageError("config file must hold a JSON object")
    return {k.replace("-", "_"): v for k, v in data.items()}


def _merged(args: argparse.Namespace, defaults: dict) -> dict:
    """Defaults < config file < explicit flags."""
    opts = dict(defaults)
    opts.update(_load_config(getattr(args, "config", None)))
    opts.update({k: v for k, v in vars(args).items() if v is not None and k in defaults})
    return opts


def _check_out_dir(path: Optional[str]) -> None:
    if path and not Path(path).resolve().parent.is_dir():
        raise UsageError(f"output directory does not exist: {Path(path).parent}")


# --- prove --------------------------------------------------------------------------

PROVE_DEFAULTS = {
    "out": "certificate.json", "steps": ref.STEPS, "resolution": "1/10000000000",
    "box_policy": "repaired", "eps": None, "workers": None, "quiet": False,
}


def cmd_prove(args: argparse.Namespace) -> int:
    from .proof import ProofConfig, default_workers, margin_summary, run_full_proof

    o = _merged(args, PROVE_DEFAULTS)
    _check_out_dir(o["out"])
    try:
        cfg = ProofConfig(
            steps=int(o["steps"]), resolution=_rational(o["resolution"]),
            box_policy=o["box_policy"],
            eps=None if o["eps"] is None else _rational(o["eps"]),
            workers=int(o["workers"]) if o["workers"] else default_workers(),
        )
    except (ValueError, TypeError) as exc:
        raise UsageError(str(exc)) from None
    cert = run_full_proof(cfg)
    cert.write(o["out"])
    s = cert.sections
    if not o["quiet"]:
        print(f"{'family':<12} {'worst quantity':<34} {'distance':>14} {'required':>14} "
              f"{'slack':>14}  ok")
        for fam, qty, ach, req, slack, ok in margin_summary(cert):
            print(f"{fam:<12} {qty:<34} {ach:>14} {req:>14} {slack:>14}  {'yes' if ok else 'NO'}")
        for lab in ("t_lo", "t_hi"):
            eb = s["error_bounds"]["active"][lab]
            print(f"R~({lab}) = {decimal_preview(Fraction(eb['R_tilde']), 10)}  "
                  f"hypothesis slack = {decimal_preview(Fraction(eb['hypothesis_slack']), 10)}  "
                  f"Gronwall = {decimal_preview(Fraction(s['gronwall']['bound'][lab]), 10)}  "
                  f"z0 = {decimal_preview(Fraction(s['gronwall']['z0_correction'][lab]), 12)}")
        if s["tables"]["compared"]:
            print(f"tables: {s['tables']['matches']}/{s['tables']['total']} entries match")
        else:
            print("tables: comparison skipped (non-reference configuration)")
        print(f"box policy: {cfg.box_policy}; Miranda existence: {s['miranda']['exists']}")
        print(f"verdict: {'PASS' if cert.passed else 'FAIL'}  ({o['out']})")
        for r in s["verdict"]["reasons"]:
            print(f"  - {r}")
    return EXIT_OK if cert.passed else EXIT_FAIL


# --- integrate ------------------------------------------------------------------------

INTEGRATE_DEFAULTS = {
    "field": "cmc-s4", "h": None, "k": None, "resolution": "1/10000000000", "no_round": False,
    "order": 1, "y0": None, "theta0": None, "out": None, "check_box": False,
    "max_bits": 1 << 18,
}


def _initial_state(field_name: str, o: dict) -> tuple:
    if o["y0"]:
        parts = [p.strip() for p in str(o["y0"]).split(",")]
        return tuple(p if "pi" in p else _rational(p) for p in parts)
    if field_name == "cmc-s4":
        theta0 = _rational(o["theta0"]) if o["theta0"] is not None else ref.A_LO
        return ("pi/2", theta0, "pi")
    if field_name == "logistic-demo":
        return (Fraction(1, 2),)
    raise UsageError("--y0 is required for this field")


def cmd_integrate(args: argparse.Namespace) -> int:
    o = _merged(args, INTEGRATE_DEFAULTS)
    if o["field"] not in FIELDS:
        raise UsageError(f"unknown field {o['field']!r}; known: {', '.join(sorted(FIELDS))}")
    field = get_field(o["field"])
    if o["h"] is None or o["k"] is None:
        raise UsageError("--h and --k are required")
    grid = GridSpec(Fraction(0) if o["no_round"] else _rational(o["resolution"]))
    _check_out_dir(o["out"])
    try:
        cfg = RTMConfig(field=field, h=_rational(o["h"]), k=int(o["k"]), grid=grid,
                        y0=_initial_state(o["field"], o), order=int(o["order"]))
    except ConfigError as exc:
        raise UsageError(str(exc)) from None
    box = ref.U1 if o["check_box"] and field.name == "cmc-s4" else None
    try:
        traj = rtm_run(cfg, box=box, record=bool(o["out"]), fail_on_box=False,
                       max_bits=int(o["max_bits"]) if o["max_bits"] else None)
    except SizeLimitExceeded as exc:
        print(f"integration stopped: {exc}; unrounded values grow too fast, "
              "raise --max-bits or use a grid", file=sys.stderr)
        return EXIT_FAIL
    except EnclosureError as exc:
        print(f"integration failed: {exc}", file=sys.stderr)
        return EXIT_FAIL
    if o["out"]:
        write_trajectory_csv(traj, o["out"])
    print("final:", " ".join(format_rational(c) for c in traj.final))
    print("approx (non-exact):", " ".join(decimal_preview(c, 12) for c in traj.final))
    if box is not None:
        if traj.box_violation:
            step, coord, value = traj.box_violation
            print(f"left U1 at step {step}, coordinate u{coord + 1} = {format_rational(value)}")
        else:
            print("all z_j inside U1")
    print("monotone:", ", ".join(f"u{i + 1} {traj.monotone(i)}" for i in range(field.dim)))
    return EXIT_OK


# --- bounds -------------------------------------------------------------------------

def parse_box_overrides(specs: Sequence[str], base: Box) -> Box:
    """``"u2=0.4,0.9"`` replaces axis 2; ``"u1=1.4"`` collapses it to a point."""
    box = base
    for spec in specs:
        name, _, rng = spec.partition("=")
        name = name.strip()
        if name not in ("u1", "u2", "u3") or not rng:
            raise UsageError(f"bad --box {spec!r}; expected u1|u2|u3=lo,hi")
        ends = [_rational(x) for x in rng.split(",")]
        if len(ends) == 1:
            ends *= 2
        if len(ends) != 2 or ends[0] > ends[1]:
            raise UsageError(f"bad range in --box {spec!r}")
        box = box.with_axis(int(name[1]) - 1, RationalInterval(*ends))
    return box


def cmd_bounds(args: argparse.Namespace) -> int:
    from .lemmas import verify_all

    box = parse_box_overrides(args.box or [], ref.U2)
    try:
        reports = verify_all(box)
    except EnclosureError as exc:
        print(f"cannot bound over this box: {exc}", file=sys.stderr)
        return EXIT_FAIL
    ok = True
    for rep in reports:
        print(f"{rep.name}: {'pass' if rep.passed else 'FAIL'}")
        for c in rep.checks:
            print(f"  [{'ok' if c.holds else 'FAIL'}] {c.name}: {decimal_preview(c.lhs, 10)} "
                  f"{c.relation} {decimal_preview(c.rhs, 10)}  slack {decimal_preview(c.slack, 10)}")
        for c in rep.info:
            print(f"  [info {'ok' if c.holds else 'off'}] {c.name}: {decimal_preview(c.lhs, 10)} "
                  f"{c.relation} {decimal_preview(c.rhs, 10)}")
        for note in rep.notes:
            print(f"  note: {note}")
        ok &= rep.passed
    if args.json:
        _check_out_dir(args.json)
        with open(args.json, "w") as fh:
            json.dump([r.to_json() for r in reports], fh, indent=2)
    return EXIT_OK if ok else EXIT_FAIL


# --- curve --------------------------------------------------------------------------

def curve_point(r, theta, digits: int = 20) -> tuple:
    """(sin r cos theta, sin r sin theta, cos r) as decimal strings; not rigorous."""
    import mpmath

    with mpmath.workdps(digits + 5):
        r, theta = mpmath.mpf(r.numerator) / r.denominator, mpmath.mpf(theta.numerator) / theta.denominator
        pts = (mpmath.sin(r) * mpmath.cos(theta), mpmath.sin(r) * mpmath.sin(theta), mpmath.cos(r))
        return tuple(mpmath.nstr(p, digits, min_fixed=-100, max_fixed=100) for p in pts)


def cmd_curve(args: argparse.Namespace) -> int:
    _check_out_dir(args.out)
    try:
        with open(args.input, newline="") as fh:
            rows = list(csv.DictReader(fh))
    except OSError as exc:
        raise UsageError(f"cannot read {args.input}: {exc}") from None
    out = open(args.out, "w", newline="") if args.out else sys.stdout
    try:
        out.write(f"# non-rigorous: decimal evaluation at {args.digits} significant digits\n")
        w = csv.writer(out)
        w.writerow(["step", "t", "x", "y", "z"])
        for row in rows:
            try:
                r, theta = parse_rational(row["u1"]), parse_rational(row["u2"])
            except (KeyError, ValueError):
                raise UsageError("input must be a cmc-s4 trajectory CSV (columns u1, u2)") from None
            w.writerow([row.get("step", ""), row.get("t", ""), *curve_point(r, theta, args.digits)])
    finally:
        if out is not sys.stdout:
            out.close()
    return EXIT_OK


# --- table ---------------------------------------------------------------------------

def cmd_table(args: argparse.Namespace) -> int:
    tables = {"t_lo": ref.TABLE_T1, "t_hi": ref.TABLE_T2}
    horizon = {"t_lo": ref.T_LO, "t_hi": ref.T_HI}
    which = ["t_lo", "t_hi"] if args.which == "both" else [args.which]
    if args.format == "json":
        json.dump({k: [list(r) for r in tables[k]] for k in which}, sys.stdout, indent=2)
        print()
        return EXIT_OK
    w = csv.writer(sys.stdout)
    w.writerow(["horizon", "j", "a_j", "r", "theta", "alpha"])
    step = (ref.A_HI - ref.A_LO) / (ref.N_SAMPLES - 1)
    for k in which:
        for j, row in enumerate(tables[k]):
            w.writerow([format_rational(horizon[k]), j, format_rational(ref.A_LO + j * step), *row])
    return EXIT_OK


# --- parser ----------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="roundtaylor",
                                description="Round Taylor method with exact rationals and the "
                                            "CMC hypertorus existence certificate")
    sub = p.add_subparsers(dest="command", required=True)

    pr = sub.add_parser("prove", help="run the full existence proof and write a certificate")
    pr.add_argument("--config", help="JSON file with any of the flags below")
    pr.add_argument("--out", help="certificate path (default certificate.json)")
    pr.add_argument("--k", "--steps", dest="steps", type=int, help="steps per trajectory")
    pr.add_argument("--resolution", "--R", dest="resolution", help="grid resolution R")
    pr.add_argument("--box-policy", choices=("repaired", "stated"))
    pr.add_argument("--eps", help="inflation from U1 to U2")
    pr.add_argument("--workers", type=int, help="parallel trajectory workers "
                                                "(default $ROUNDTAYLOR_WORKERS or 1)")
    pr.add_argument("--quiet", action="store_true", default=None)
    pr.set_defaults(func=cmd_prove)

    it = sub.add_parser("integrate", help="integrate one trajectory")
    it.add_argument("--config")
    it.add_argument("--field", help=f"one of {', '.join(sorted(FIELDS))}")
    it.add_argument("--h")
    it.add_argument("--k", type=int)
    it.add_argument("--resolution", "--R", dest="resolution")
    it.add_argument("--no-round", action="store_true", default=None,
                    help="R = 0, exact-rational fields only")
    it.add_argument("--order", type=int)
    it.add_argument("--y0", help="comma separated; symbols like pi/2 allowed")
    it.add_argument("--theta0", help="cmc-s4 shortcut for y0 = (pi/2, theta0, pi)")
    it.add_argument("--out", help="trajectory CSV")
    it.add_argument("--check-box", action="store_true", default=None,
                    help="report the first step leaving the stated U1")
    it.add_argument("--max-bits", type=int,
                    help="abort when a numerator or denominator exceeds this many bits "
                         "(default 262144; 0 disables)")
    it.set_defaults(func=cmd_integrate)

    bd = sub.add_parser("bounds", help="verify the range and derivative bounds")
    bd.add_argument("--box", action="append", help='axis override, e.g. "u2=0.4,0.9"')
    bd.add_argument("--json", help="also write the reports as JSON")
    bd.set_defaults(func=cmd_bounds)

    cv = sub.add_parser("curve", help="profile curve points from a trajectory CSV (non-rigorous)")
    cv.add_argument("input")
    cv.add_argument("--out")
    cv.add_argument("--digits", type=int, default=15)
    cv.set_defaults(func=cmd_curve)

    tb = sub.add_parser("table", help="dump the embedded endpoint tables")
    tb.add_argument("--which", choices=("t_lo", "t_hi", "both"), default="both")
    tb.add_argument("--format", choices=("csv", "json"), default="csv")
    tb.set_defaults(func=cmd_table)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())

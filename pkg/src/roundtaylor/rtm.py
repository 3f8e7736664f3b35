"""Round Taylor Method: grid-rounded Taylor stepping and its global error bound.

One step of order m maps a grid point z to

    y = z + f(z) h + F_1(z) h^2/2! + ... + F_{m-1}(z) h^m/m!
    z_next = R * floor(y / R)

with F_1 = (Df) f, F_2 = (D F_1) f, ...  For transcendental fields ``y`` is
only known through an enclosure, and the floor is determined exactly by
refining until both enclosure ends fall into the same grid cell.
"""

from __future__ import annotations

import csv
import re
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial
from typing import Optional, Sequence, Union

from .enclosure import (DEFAULT_REQUEST, PrecisionRequest, bits_for_width, enclose_exp,
                        floor_of_enclosed, pi_ball)
from .exact import GridSpec, decimal_preview, format_rational
from .fields import VectorFieldDef, taylor_coefficients
from .interval import Box, RationalInterval, sqrt_upper

InitialValue = Union[Fraction, int, str]


class BoxViolation(RuntimeError):
    def __init__(self, step: int, coord: int, value: Fraction):
        super().__init__(f"z_{step}[{coord}] = {value} leaves the box")
        self.step, self.coord, self.value = step, coord, value


class SizeLimitExceeded(ArithmeticError):
    """Exact unrounded values outgrew the allowed size."""

    def __init__(self, step: int, bits: int, limit: int):
        super().__init__(f"step {step}: exact value needs {bits} bits (limit {limit})")
        self.step, self.bits, self.limit = step, bits, limit


class ConfigError(ValueError):
    pass


_PI_SYMBOL = re.compile(r"^\s*(-?\d*)\s*\*?\s*pi\s*(?:/\s*(\d+))?\s*$")


def pi_multiple(symbol: str) -> Optional[Fraction]:
    """Coefficient c for symbols like ``"pi"``, ``"pi/2"``, ``"3*pi/4"``."""
    m = _PI_SYMBOL.match(symbol)
    if not m:
        return None
    num = m.group(1)
    c = Fraction(int(num) if num not in ("", "-") else (-1 if num == "-" else 1))
    if m.group(2):
        c /= int(m.group(2))
    return c


def initial_component(value: InitialValue, grid: GridSpec) -> tuple[Fraction, Fraction]:
    """Grid-round one initial coordinate.

    Returns ``(z0, dev)`` with ``0 <= y0 - z0 <= dev``.  Multiples of pi are
    rounded through an enclosure whose floor is determined exactly.
    """
    if isinstance(value, str):
        c = pi_multiple(value)
        if c is None:
            from .exact import parse_rational
            value = parse_rational(value)
        else:
            if not grid.rounds:
                raise ConfigError("symbolic initial values need a rounding grid (R > 0)")

            def enc(k: int) -> RationalInterval:
                prec = bits_for_width(grid.resolution) + 32 * k + 16
                return (pi_ball(prec).to_interval()) * c

            return floor_of_enclosed(enc(0), grid, enc), grid.resolution
    value = Fraction(value)
    if not grid.rounds:
        return value, Fraction(0)
    z = grid.point(grid.floor_index(value))
    return z, value - z


@dataclass(frozen=True)
class RTMConfig:
    field: VectorFieldDef
    h: Fraction
    k: int
    grid: GridSpec
    y0: tuple
    order: int = 1
    request: Optional[PrecisionRequest] = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "h", Fraction(self.h))
        object.__setattr__(self, "y0", tuple(self.y0))
        if self.h <= 0:
            raise ConfigError("step h must be > 0")
        if self.k < 0:
            raise ConfigError("step count k must be >= 0")
        if self.order < 1:
            raise ConfigError("order m must be >= 1")
        if len(self.y0) != self.field.dim:
            raise ConfigError(f"y0 has {len(self.y0)} components, field needs {self.field.dim}")
        if not self.grid.rounds and not self.field.exact_rational:
            raise ConfigError(f"field {self.field.name} is transcendental; R = 0 is not allowed")
        if self.field.max_order is not None and self.order > self.field.max_order:
            raise ConfigError(f"field {self.field.name} supports order <= {self.field.max_order}")

    @property
    def precision(self) -> PrecisionRequest:
        if self.request is not None:
            return self.request
        if self.grid.rounds:
            return PrecisionRequest(self.grid.resolution / 1000)
        return DEFAULT_REQUEST


@dataclass
class Trajectory:
    field_name: str
    h: Fraction
    k: int
    resolution: Fraction
    z0: tuple
    final: tuple
    initial_deviation: tuple
    points: Optional[list] = None
    hull: Optional[Box] = None
    increases: list = field(default_factory=list)
    decreases: list = field(default_factory=list)
    box_violation: Optional[tuple] = None  # (step, coord, value)
    extra_refinements: int = 0

    def __len__(self) -> int:
        return self.k + 1

    def monotone(self, coord: int) -> str:
        if self.decreases[coord] == 0:
            return "increasing" if self.increases[coord] == self.k else "nondecreasing"
        if self.increases[coord] == 0:
            return "decreasing" if self.decreases[coord] == self.k else "nonincreasing"
        return "none"

    def series(self, coord: int) -> list:
        if self.points is None:
            raise ValueError("trajectory was run with record=False")
        return [p[coord] for p in self.points]

    def times(self) -> list:
        return [i * self.h for i in range(self.k + 1)]


def _refine_prec(base: int, attempt: int) -> int:
    return base * (2 ** attempt)


def _euler_step_balls(z, cfg: RTMConfig, base: int):
    """Order-1 step for fields with a fixed-point evaluator, integers only.

    With f_i in [(m - r) / 2^p, (m + r) / 2^p] the candidate indices are
    floor((z_i + h (m -+ r) / 2^p) / R); the precision doubles until the two
    agree, exactly as ``floor_of_enclosed`` does on rational intervals.
    """
    fld, grid = cfg.field, cfg.grid
    hn, hd = cfg.h.numerator, cfg.h.denominator
    Rn, Rd = grid.resolution.numerator, grid.resolution.denominator
    out = [None] * fld.dim
    pending = list(range(fld.dim))
    extra = 0
    for attempt in range(cfg.precision.max_refinements + 1):
        prec = _refine_prec(base, attempt)
        balls = fld.point_balls(z, prec)
        still = []
        for i in pending:
            b = balls[i]
            zn, zd = z[i].numerator, z[i].denominator
            den = zd * hd * Rn << prec
            head = zn * hd * Rd << prec
            lo = (head + hn * (b.mid - b.rad) * zd * Rd) // den
            hi = (head + hn * (b.mid + b.rad) * zd * Rd) // den
            if lo == hi:
                out[i] = grid.point(lo)
            else:
                still.append(i)
        if not still:
            return tuple(out), extra
        pending = still
        extra += len(still)
    from .enclosure import GridTieUnresolved
    raise GridTieUnresolved(f"components {pending} straddle a grid point at step from {z}")


def rtm_step(z: Sequence[Fraction], cfg: RTMConfig, _coeffs=None, _base_prec=None,
             fast: bool = True):
    """One RTM step from grid point ``z``; returns ``(z_next, extra_refinements)``.

    ``fast=False`` forces the generic rational-interval path (used by tests
    to cross-check the integer fast path).
    """
    coeffs = _coeffs or taylor_coefficients(cfg.h, cfg.order)
    fld, order, grid = cfg.field, cfg.order, cfg.grid
    if fast and grid.rounds and order == 1 and fld.point_balls is not None:
        base = _base_prec or (bits_for_width(cfg.precision.target_width) + 8)
        return _euler_step_balls(z, cfg, base)

    if not grid.rounds:
        terms = fld.point_terms(z, order, 0)
        return tuple(
            z[i] + sum((coeffs[q] * terms[q][i].lo for q in range(order)), Fraction(0))
            for i in range(fld.dim)
        ), 0

    base = _base_prec or (bits_for_width(cfg.precision.target_width) + 8)

    def y_enclosure(prec: int) -> list:
        terms = fld.point_terms(z, order, prec)
        out = []
        for i in range(fld.dim):
            lo = hi = z[i]
            for q in range(order):
                c, t = coeffs[q], terms[q][i]
                lo += c * t.lo
                hi += c * t.hi
            out.append(RationalInterval(lo, hi))
        return out

    first = y_enclosure(base)
    extra = 0
    nxt = []
    for i, v in enumerate(first):
        calls = []

        def refine(attempt: int, i=i, calls=calls) -> RationalInterval:
            calls.append(attempt)
            return y_enclosure(_refine_prec(base, attempt))[i]

        nxt.append(floor_of_enclosed(v, grid, refine, cfg.precision.max_refinements))
        extra += len(calls)
    return tuple(nxt), extra


def rtm_run(cfg: RTMConfig, box: Optional[Box] = None, record: bool = True,
            fail_on_box: bool = True, max_bits: Optional[int] = None) -> Trajectory:
    """Iterate ``rtm_step`` k times from the grid-rounded initial state.

    Every z_j (including z_0) is checked against ``box`` when given; with
    ``fail_on_box`` a violation raises :class:`BoxViolation`, otherwise the
    first one is recorded on the trajectory.  Per-coordinate monotonicity and
    the coordinate hull are always recorded.  ``max_bits`` caps the size of
    numerators and denominators (useful with R = 0, where they explode).
    """
    z0_dev = [initial_component(v, cfg.grid) for v in cfg.y0]
    z = tuple(c for c, _ in z0_dev)
    n = cfg.field.dim
    coeffs = taylor_coefficients(cfg.h, cfg.order)
    base = bits_for_width(cfg.precision.target_width) + 8
    traj = Trajectory(
        field_name=cfg.field.name, h=cfg.h, k=cfg.k, resolution=cfg.grid.resolution,
        z0=z, final=z, initial_deviation=tuple(d for _, d in z0_dev),
        points=[z] if record else None, increases=[0] * n, decreases=[0] * n,
    )
    lo, hi = list(z), list(z)

    def check(step: int, point) -> None:
        if box is None or traj.box_violation is not None:
            return
        bad = box.first_violation(point)
        if bad is not None:
            traj.box_violation = (step, bad, point[bad])
            if fail_on_box:
                raise BoxViolation(step, bad, point[bad])

    check(0, z)
    for step in range(1, cfg.k + 1):
        nz, extra = rtm_step(z, cfg, coeffs, base)
        traj.extra_refinements += extra
        if max_bits is not None:
            bits = max(max(c.numerator.bit_length(), c.denominator.bit_length()) for c in nz)
            if bits > max_bits:
                raise SizeLimitExceeded(step, bits, max_bits)
        for i in range(n):
            a, b = z[i], nz[i]
            if b > a:
                traj.increases[i] += 1
                if b > hi[i]:
                    hi[i] = b
            elif b < a:
                traj.decreases[i] += 1
                if b < lo[i]:
                    lo[i] = b
        z = nz
        check(step, z)
        if record:
            traj.points.append(z)
    traj.final = z
    traj.hull = Box.from_bounds(list(zip(lo, hi)))
    return traj


def euler_unrounded(f, y0: Fraction, h: Fraction, steps: int) -> Fraction:
    """Plain Euler with exact rationals and no rounding (numbers blow up)."""
    y = Fraction(y0)
    for _ in range(steps):
        y = y + h * f(y)
    return y


def write_trajectory_csv(traj: Trajectory, path) -> None:
    if traj.points is None:
        raise ValueError("trajectory has no recorded points")
    n = len(traj.z0)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["step", "t"] + [f"u{i + 1}" for i in range(n)])
        for i, p in enumerate(traj.points):
            w.writerow([i, decimal_preview(i * traj.h, 12)] + [format_rational(c) for c in p])


# --- global error bound -----------------------------------------------------------

@dataclass(frozen=True)
class BoundSet:
    """Constants of the RTM error theorem for one order m.

    ``M_components`` bounds |(F_m)_i| on U2, ``K`` = (K_0, ..., K_{m-1})
    bounds the Jacobians of F_0..F_{m-1}, ``M0`` bounds |f_i| and ``eps`` is
    the inflation from U1 to U2.
    """

    M0: Fraction
    M_components: tuple
    K: tuple
    eps: Fraction

    def __post_init__(self) -> None:
        for name in ("M0", "eps"):
            object.__setattr__(self, name, Fraction(getattr(self, name)))
        object.__setattr__(self, "M_components", tuple(Fraction(x) for x in self.M_components))
        object.__setattr__(self, "K", tuple(Fraction(x) for x in self.K))
        if any(x < 0 for x in (self.M0, self.eps, *self.M_components, *self.K)):
            raise ValueError("bound constants must be >= 0")

    @property
    def order(self) -> int:
        return len(self.K)

    def L(self, h: Fraction) -> Fraction:
        return sum((Kq * Fraction(h) ** q / factorial(q + 1) for q, Kq in enumerate(self.K)),
                   Fraction(0))

    @property
    def M_squared(self) -> Fraction:
        return sum((m * m for m in self.M_components), Fraction(0))

    def M_upper(self, tol=Fraction(1, 10**9)) -> Fraction:
        return sqrt_upper(self.M_squared, tol)


@dataclass(frozen=True)
class ErrorBound:
    R_tilde: Fraction
    truncation_term: Fraction
    rounding_term: Fraction
    growth: Fraction
    L: Fraction
    M: Fraction
    sqrt_n: Fraction
    hypothesis_rhs: Fraction
    hypothesis_slack: Fraction

    @property
    def hypothesis_holds(self) -> bool:
        return self.hypothesis_slack > 0

    def to_json(self) -> dict:
        return {k: format_rational(v) for k, v in self.__dict__.items()} | {
            "hypothesis_holds": self.hypothesis_holds}


def compute_error_bound(bounds: BoundSet, h: Fraction, k: int, n: int,
                        resolution: Fraction, order: Optional[int] = None) -> ErrorBound:
    """Rational upper bound on R~ = (M h^m / (L (m+1)!) + sqrt(n) R / (L h)) (e^{Lkh} - 1).

    Also evaluates the hypothesis eps > M0 h + R~; a negative slack means the
    theorem does not apply (reported, not raised).
    """
    h = Fraction(h)
    m = order or bounds.order
    if m != bounds.order:
        raise ValueError(f"bound set is for order {bounds.order}, not {m}")
    L = bounds.L(h)
    if L <= 0:
        raise ValueError("L must be > 0")
    M = bounds.M_upper()
    sqrt_n = sqrt_upper(Fraction(n), Fraction(1, 10**12))
    trunc = M * h**m / (L * factorial(m + 1))
    rounding = sqrt_n * Fraction(resolution) / (L * h)
    horizon = L * k * h
    growth = enclose_exp(horizon, PrecisionRequest(Fraction(1, 10**20))).hi - 1 if k else Fraction(0)
    R_tilde = (trunc + rounding) * growth
    rhs = bounds.M0 * h + R_tilde
    return ErrorBound(R_tilde, trunc, rounding, growth, L, M, sqrt_n, rhs, bounds.eps - rhs)

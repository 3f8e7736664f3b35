"""Rigorous rational enclosures of pi, sin, cos, cot, csc and exp.

Everything is computed with Python integers in fixed point: a :class:`Ball`
``(mid, rad, prec)`` stands for the closed interval
``[(mid - rad) / 2**prec, (mid + rad) / 2**prec]``.  Each kernel tracks a
bound on its own truncation and rounding error in units of the last place,
so the returned ball provably contains the true value.  No floats are used.

Argument reduction for sin/cos goes through a Machin-formula enclosure of
pi, and exp reduces by multiples of ln 2.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Optional

from .exact import GridSpec
from .interval import RationalInterval


class EnclosureError(ArithmeticError):
    pass


class RefinementExhausted(EnclosureError):
    """Requested width not reached within the refinement budget."""


class PoleProximityError(EnclosureError):
    """A divisor enclosure (sin for cot/csc) cannot be separated from zero."""


class GridTieUnresolved(EnclosureError):
    """An enclosure still straddles a grid point after all refinements."""


def _ceil_shift(a: int, s: int) -> int:
    return -((-a) >> s)


class Ball:
    """Fixed-point midpoint/radius enclosure at ``prec`` fractional bits."""

    __slots__ = ("mid", "rad", "prec")

    def __init__(self, mid: int, rad: int, prec: int):
        self.mid = mid
        self.rad = rad
        self.prec = prec

    @classmethod
    def from_rational(cls, x: Fraction, prec: int) -> "Ball":
        q, r = divmod(x.numerator << prec, x.denominator)
        return cls(q, 0 if r == 0 else 1, prec)

    @classmethod
    def from_int(cls, n: int, prec: int) -> "Ball":
        return cls(n << prec, 0, prec)

    def lo(self) -> Fraction:
        return Fraction(self.mid - self.rad, 1 << self.prec)

    def hi(self) -> Fraction:
        return Fraction(self.mid + self.rad, 1 << self.prec)

    def to_interval(self) -> RationalInterval:
        return RationalInterval(self.lo(), self.hi())

    def width(self) -> Fraction:
        return Fraction(2 * self.rad, 1 << self.prec)

    def excludes_zero(self) -> bool:
        return abs(self.mid) > self.rad

    def _coerce(self, other) -> "Ball":
        if isinstance(other, Ball):
            return other
        if isinstance(other, int):
            return Ball(other << self.prec, 0, self.prec)
        return Ball.from_rational(Fraction(other), self.prec)

    def __add__(self, other):
        o = self._coerce(other)
        return Ball(self.mid + o.mid, self.rad + o.rad, self.prec)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return Ball(self.mid - o.mid, self.rad + o.rad, self.prec)

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __neg__(self):
        return Ball(-self.mid, self.rad, self.prec)

    def __mul__(self, other):
        if isinstance(other, int):
            return Ball(self.mid * other, self.rad * abs(other), self.prec)
        o = self._coerce(other)
        p = self.prec
        m1, r1, m2, r2 = self.mid, self.rad, o.mid, o.rad
        spread = abs(m1) * r2 + abs(m2) * r1 + r1 * r2
        return Ball((m1 * m2) >> p, _ceil_shift(spread, p) + 1, p)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if not o.excludes_zero():
            raise PoleProximityError("division by a ball containing 0")
        p = self.prec
        m1, r1, m2, r2 = self.mid, self.rad, o.mid, o.rad
        q = (m1 << p) // m2
        a2 = abs(m2)
        num = (r1 * a2 + abs(m1) * r2) << p
        den = (a2 - r2) * a2
        return Ball(q, -((-num) // den) + 1, p)

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def sqr(self) -> "Ball":
        return self * self

    def __repr__(self) -> str:
        return f"Ball({self.mid}±{self.rad} / 2^{self.prec})"


# --- constants -------------------------------------------------------------

def _atan_inv(n: int, w: int) -> tuple[int, int]:
    """atan(1/n) * 2**w as (value, error bound in ulps)."""
    power = (1 << w) // n
    total = power
    n2 = n * n
    k, sign, terms = 1, -1, 1
    while power:
        power //= n2
        total += sign * (power // (2 * k + 1))
        sign, k, terms = -sign, k + 1, terms + 1
    return total, 2 * terms + 1


def _atanh_inv(n: int, w: int) -> tuple[int, int]:
    power = (1 << w) // n
    total = power
    n2 = n * n
    k, terms = 1, 1
    while power:
        power //= n2
        total += power // (2 * k + 1)
        k, terms = k + 1, terms + 1
    return total, 2 * terms + 2


_GUARD = 16


@lru_cache(maxsize=64)
def _pi_fixed(w: int) -> tuple[int, int]:
    wg = w + _GUARD
    a, ea = _atan_inv(5, wg)
    b, eb = _atan_inv(239, wg)
    mid = 16 * a - 4 * b
    err = 16 * ea + 4 * eb
    return mid >> _GUARD, _ceil_shift(err, _GUARD) + 1


@lru_cache(maxsize=64)
def _ln2_fixed(w: int) -> tuple[int, int]:
    wg = w + _GUARD
    a, ea = _atanh_inv(3, wg)
    return (2 * a) >> _GUARD, _ceil_shift(2 * ea, _GUARD) + 1


def pi_ball(prec: int) -> Ball:
    mid, rad = _pi_fixed(prec)
    return Ball(mid, rad, prec)


# --- kernels ---------------------------------------------------------------

def _sin_cos_series(r: int, wp: int) -> tuple[int, int, int]:
    """sin and cos of r/2**wp for |r/2**wp| < 1, plus an error bound in ulps."""
    r2 = (r * r) >> wp
    s = t = r
    n, terms = 1, 1
    while t:
        t = -(((t * r2) >> wp) // ((n + 1) * (n + 2)))
        s += t
        n += 2
        terms += 1
    c = t = 1 << wp
    n = 0
    while t:
        t = -(((t * r2) >> wp) // ((n + 1) * (n + 2)))
        c += t
        n += 2
        terms += 1
    return s, c, 4 * terms + 4


def sincos_ball(x: Fraction, prec: int) -> tuple[Ball, Ball]:
    """Enclosures of (sin x, cos x) at ``prec`` fractional bits."""
    num, den = x.numerator, x.denominator
    if num == 0:
        return Ball(0, 0, prec), Ball(1 << prec, 0, prec)
    kbits = (abs(num) // den).bit_length()
    wp = prec + 24 + kbits
    X, rem = divmod(num << wp, den)
    x_rad = 0 if rem == 0 else 1
    hp, hp_rad = _pi_fixed(wp - 1)  # same integers are pi/2 at wp bits
    k = (2 * X + hp) // (2 * hp)
    r = X - k * hp
    r_rad = x_rad + abs(k) * hp_rad
    s, c, err = _sin_cos_series(r, wp)
    err += r_rad
    q = k & 3
    if q == 1:
        s, c = c, -s
    elif q == 2:
        s, c = -s, -c
    elif q == 3:
        s, c = -c, s
    shift = wp - prec
    rad = (err >> shift) + 2
    return Ball(s >> shift, rad, prec), Ball(c >> shift, rad, prec)


def exp_ball(x: Fraction, prec: int) -> Ball:
    """Enclosure of e**x at ``prec`` fractional bits (absolute accuracy)."""
    x = Fraction(x)
    if x == 0:
        return Ball(1 << prec, 0, prec)
    n = round(x / Fraction(6931471805599453, 10**16))
    wp = prec + 24 + max(n, 0) + abs(n).bit_length()
    X, rem = divmod(x.numerator << wp, x.denominator)
    x_rad = 0 if rem == 0 else 1
    ln2, ln2_rad = _ln2_fixed(wp)
    r = X - n * ln2
    r_rad = x_rad + abs(n) * ln2_rad
    s = t = 1 << wp
    k, terms = 1, 1
    while t:
        t = ((t * r) >> wp) // k
        s += t
        k += 1
        terms += 1
    err = 4 * terms + 8 + 2 * r_rad
    if n >= 0:
        s <<= n
        err <<= n
    else:
        s >>= -n
        err = (err >> -n) + 1
    shift = wp - prec
    return Ball(s >> shift, (err >> shift) + 2, prec)


# --- public enclosures -----------------------------------------------------

@dataclass(frozen=True)
class PrecisionRequest:
    target_width: Fraction = Fraction(1, 10**15)
    max_refinements: int = 20

    def __post_init__(self) -> None:
        object.__setattr__(self, "target_width", Fraction(self.target_width))
        if self.target_width <= 0:
            raise ValueError("target_width must be > 0")
        if self.max_refinements < 1:
            raise ValueError("max_refinements must be >= 1")


DEFAULT_REQUEST = PrecisionRequest()


def bits_for_width(width: Fraction) -> int:
    """Smallest p with 2**-p <= width."""
    width = Fraction(width)
    inv = Fraction(width.denominator, width.numerator)
    p = max(0, (inv.numerator // inv.denominator).bit_length())
    while Fraction(1, 1 << p) > width:
        p += 1
    return p


LADDER_START = 32


def _refine(compute: Callable[[int], RationalInterval], req: PrecisionRequest,
            pole_check: Optional[Callable[[int], bool]] = None) -> RationalInterval:
    # Every request walks the same precision ladder 32, 64, 128, ... and
    # intersects as it goes, so a finer request continues the chain of a
    # coarser one and its result is nested inside it.
    prec = LADDER_START
    best: Optional[RationalInterval] = None
    pole_blocked = False
    for _ in range(req.max_refinements):
        if pole_check is not None and not pole_check(prec):
            pole_blocked = True
            prec *= 2
            continue
        pole_blocked = False
        iv = compute(prec)
        best = iv if best is None else best.intersect(iv)
        if best.width <= req.target_width:
            return best
        prec *= 2
    if pole_blocked:
        raise PoleProximityError("sin enclosure straddles 0 after all refinements")
    raise RefinementExhausted(f"width {req.target_width} not reached")


_UNIT = RationalInterval(-1, 1)


def enclose_pi(req: PrecisionRequest = DEFAULT_REQUEST) -> RationalInterval:
    return _refine(lambda p: pi_ball(p).to_interval(), req)


def enclose_sin(x, req: PrecisionRequest = DEFAULT_REQUEST) -> RationalInterval:
    x = Fraction(x)
    return _refine(lambda p: sincos_ball(x, p)[0].to_interval().intersect(_UNIT), req)


def enclose_cos(x, req: PrecisionRequest = DEFAULT_REQUEST) -> RationalInterval:
    x = Fraction(x)
    return _refine(lambda p: sincos_ball(x, p)[1].to_interval().intersect(_UNIT), req)


def _sin_clear(x: Fraction) -> Callable[[int], bool]:
    return lambda p: sincos_ball(x, p)[0].excludes_zero()


def enclose_cot(x, req: PrecisionRequest = DEFAULT_REQUEST) -> RationalInterval:
    x = Fraction(x)

    def compute(p: int) -> RationalInterval:
        s, c = sincos_ball(x, p)
        return (c / s).to_interval()

    return _refine(compute, req, _sin_clear(x))


def enclose_csc(x, req: PrecisionRequest = DEFAULT_REQUEST) -> RationalInterval:
    x = Fraction(x)

    def compute(p: int) -> RationalInterval:
        s, _ = sincos_ball(x, p)
        return (1 / s).to_interval()

    return _refine(compute, req, _sin_clear(x))


def enclose_csc2(x, req: PrecisionRequest = DEFAULT_REQUEST) -> RationalInterval:
    x = Fraction(x)

    def compute(p: int) -> RationalInterval:
        s, _ = sincos_ball(x, p)
        return (1 / s).to_interval().sqr()

    return _refine(compute, req, _sin_clear(x))


def enclose_exp(x, req: PrecisionRequest = DEFAULT_REQUEST) -> RationalInterval:
    x = Fraction(x)
    return _refine(lambda p: exp_ball(x, p).to_interval(), req)


ENCLOSERS = {
    "sin": enclose_sin,
    "cos": enclose_cos,
    "cot": enclose_cot,
    "csc": enclose_csc,
    "csc2": enclose_csc2,
    "exp": enclose_exp,
}


def floor_of_enclosed(v: RationalInterval, grid: GridSpec,
                      refine: Optional[Callable[[int], RationalInterval]] = None,
                      max_refinements: int = 20) -> Fraction:
    """Exact ``R * floor(y / R)`` for a value ``y`` known only through ``v``.

    ``refine(k)`` is called with k = 1, 2, ... and must return enclosures of
    the same value; they are intersected so the bracket only ever shrinks.
    Raises :class:`GridTieUnresolved` rather than guessing a side.
    """
    lo_i, hi_i = grid.floor_index(v.lo), grid.floor_index(v.hi)
    attempt = 0
    while lo_i != hi_i:
        attempt += 1
        if refine is None or attempt > max_refinements:
            raise GridTieUnresolved(
                f"enclosure [{v.lo}, {v.hi}] straddles a grid point of {grid.resolution}")
        v = v.intersect(refine(attempt))
        lo_i, hi_i = grid.floor_index(v.lo), grid.floor_index(v.hi)
    return grid.point(lo_i)


# --- ranges over intervals -------------------------------------------------

class NonMonotoneDomain(EnclosureError):
    pass


def _critical_points(domain: RationalInterval, offset: Fraction, pi_iv: RationalInterval):
    """Integers k such that offset*pi + k*pi may lie in the domain."""
    a, b = domain.lo, domain.hi
    k_min = int((a / pi_iv.hi - offset) // 1) - 2
    k_max = int((b / pi_iv.lo - offset) // 1) + 2
    hits = []
    for k in range(k_min, k_max + 1):
        c_lo = (offset + k) * (pi_iv.lo if offset + k >= 0 else pi_iv.hi)
        c_hi = (offset + k) * (pi_iv.hi if offset + k >= 0 else pi_iv.lo)
        if c_hi >= a and c_lo <= b:
            hits.append(k)
    return hits


def monotone_range(fn_id: str, domain: RationalInterval,
                   req: PrecisionRequest = DEFAULT_REQUEST) -> RationalInterval:
    """Rigorous enclosure of ``{fn(x) : x in domain}``.

    The range is the hull of the endpoint values and the values at interior
    critical points (located against an enclosure of pi; any critical point
    that might be inside is included).  cot, csc and csc2 raise
    :class:`PoleProximityError` when a multiple of pi may lie in the domain.
    """
    if fn_id not in ENCLOSERS:
        raise KeyError(f"unknown function {fn_id!r}")
    enc = ENCLOSERS[fn_id]
    a, b = domain.lo, domain.hi
    ends = [enc(a, req)] if a == b else [enc(a, req), enc(b, req)]
    if fn_id == "exp" or a == b:
        return RationalInterval.hull(*ends)
    pi_iv = enclose_pi(PrecisionRequest(min(req.target_width, Fraction(1, 10**20))))
    extra = []
    if fn_id == "sin":
        extra = [(-1) ** (k % 2) for k in _critical_points(domain, Fraction(1, 2), pi_iv)]
    elif fn_id == "cos":
        extra = [(-1) ** (k % 2) for k in _critical_points(domain, Fraction(0), pi_iv)]
    else:
        if _critical_points(domain, Fraction(0), pi_iv):
            raise PoleProximityError(f"{fn_id} has a pole in {domain!r}")
        if fn_id == "cot":
            return RationalInterval(ends[1].lo, ends[0].hi)
        crit = [(-1) ** (k % 2) for k in _critical_points(domain, Fraction(1, 2), pi_iv)]
        if fn_id == "csc2":
            extra = [1 for _ in crit]
        else:
            extra = crit
    return RationalInterval.hull(*ends, *extra)

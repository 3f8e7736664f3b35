"""Closed intervals with exact rational endpoints, boxes, and range bounds."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

Number = Union[int, Fraction]


class IntervalDivisionError(ZeroDivisionError):
    """Division by an interval that contains zero."""


@dataclass(frozen=True)
class RationalInterval:
    lo: Fraction
    hi: Fraction

    def __post_init__(self) -> None:
        lo, hi = Fraction(self.lo), Fraction(self.hi)
        if lo > hi:
            raise ValueError(f"empty interval [{lo}, {hi}]")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @classmethod
    def point(cls, x: Number) -> "RationalInterval":
        x = Fraction(x)
        return cls(x, x)

    @classmethod
    def hull(cls, *values: Union[Number, "RationalInterval"]) -> "RationalInterval":
        los, his = [], []
        for v in values:
            v = as_interval(v)
            los.append(v.lo)
            his.append(v.hi)
        return cls(min(los), max(his))

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def mid(self) -> Fraction:
        return (self.lo + self.hi) / 2

    @property
    def mag(self) -> Fraction:
        """Largest absolute value in the interval."""
        return max(-self.lo, self.hi)

    @property
    def is_point(self) -> bool:
        return self.lo == self.hi

    def contains(self, x: Union[Number, "RationalInterval"]) -> bool:
        x = as_interval(x)
        return self.lo <= x.lo and x.hi <= self.hi

    __contains__ = contains

    def contains_zero(self) -> bool:
        return self.lo <= 0 <= self.hi

    def intersect(self, other: "RationalInterval") -> "RationalInterval":
        return RationalInterval(max(self.lo, other.lo), min(self.hi, other.hi))

    def abs(self) -> "RationalInterval":
        if self.lo >= 0:
            return self
        if self.hi <= 0:
            return RationalInterval(-self.hi, -self.lo)
        return RationalInterval(Fraction(0), self.mag)

    def sqr(self) -> "RationalInterval":
        a = self.abs()
        return RationalInterval(a.lo * a.lo, a.hi * a.hi)

    def __add__(self, other):
        return interval_add(self, other)

    __radd__ = __add__

    def __sub__(self, other):
        return interval_sub(self, other)

    def __rsub__(self, other):
        return interval_sub(as_interval(other), self)

    def __mul__(self, other):
        return interval_mul(self, other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        return interval_div(self, other)

    def __rtruediv__(self, other):
        return interval_div(as_interval(other), self)

    def __neg__(self):
        return RationalInterval(-self.hi, -self.lo)

    def __repr__(self) -> str:
        return f"[{self.lo}, {self.hi}]"


def as_interval(x: Union[Number, RationalInterval]) -> RationalInterval:
    if isinstance(x, RationalInterval):
        return x
    return RationalInterval.point(x)


def interval_add(a, b) -> RationalInterval:
    a, b = as_interval(a), as_interval(b)
    return RationalInterval(a.lo + b.lo, a.hi + b.hi)


def interval_sub(a, b) -> RationalInterval:
    a, b = as_interval(a), as_interval(b)
    return RationalInterval(a.lo - b.hi, a.hi - b.lo)


def interval_mul(a, b) -> RationalInterval:
    a, b = as_interval(a), as_interval(b)
    if b.is_point:
        c = b.lo
        return RationalInterval(a.lo * c, a.hi * c) if c >= 0 else RationalInterval(a.hi * c, a.lo * c)
    if a.is_point:
        return interval_mul(b, a)
    p = (a.lo * b.lo, a.lo * b.hi, a.hi * b.lo, a.hi * b.hi)
    return RationalInterval(min(p), max(p))


def interval_div(a, b) -> RationalInterval:
    a, b = as_interval(a), as_interval(b)
    if b.contains_zero():
        raise IntervalDivisionError(f"divisor {b!r} contains 0")
    return interval_mul(a, RationalInterval(1 / b.hi, 1 / b.lo))


@dataclass(frozen=True)
class Box:
    """Axis-aligned product of rational intervals."""

    axes: tuple

    def __post_init__(self) -> None:
        object.__setattr__(self, "axes", tuple(as_interval(a) for a in self.axes))

    @classmethod
    def from_bounds(cls, bounds: Sequence[tuple]) -> "Box":
        return cls(tuple(RationalInterval(lo, hi) for lo, hi in bounds))

    @property
    def dim(self) -> int:
        return len(self.axes)

    def __getitem__(self, i: int) -> RationalInterval:
        return self.axes[i]

    def __iter__(self):
        return iter(self.axes)

    def inflate(self, eps: Number) -> "Box":
        eps = Fraction(eps)
        return Box(tuple(RationalInterval(a.lo - eps, a.hi + eps) for a in self.axes))

    def contains_point(self, u: Sequence[Fraction]) -> bool:
        return all(a.lo <= x <= a.hi for a, x in zip(self.axes, u))

    def first_violation(self, u: Sequence[Fraction]):
        """Index of the first coordinate outside the box, or None."""
        for i, (a, x) in enumerate(zip(self.axes, u)):
            if not a.lo <= x <= a.hi:
                return i
        return None

    def with_axis(self, i: int, axis: RationalInterval) -> "Box":
        axes = list(self.axes)
        axes[i] = as_interval(axis)
        return Box(tuple(axes))


def range_product_bound(factors: Iterable[RationalInterval], scale: Number = 1,
                        offset: Number = 0) -> RationalInterval:
    """Range of ``offset + scale * prod(factors)`` over the factor box."""
    acc = RationalInterval.point(scale)
    for f in factors:
        acc = interval_mul(acc, f)
    return interval_add(acc, offset)


def sqrt_upper(x: Fraction, tol: Fraction = Fraction(1, 10**6)) -> Fraction:
    """Rational ``q`` with ``q*q >= x`` and ``q - sqrt(x) <= tol``.

    Bisection on an exact rational bracket; only the upper side is returned.
    """
    x = Fraction(x)
    if x < 0:
        raise ValueError("sqrt of negative number")
    if x == 0:
        return Fraction(0)
    lo, hi = Fraction(0), max(Fraction(1), x)
    while hi - lo > tol:
        mid = (lo + hi) / 2
        if mid * mid >= x:
            hi = mid
        else:
            lo = mid
    return hi


def sqrt_lower(x: Fraction, tol: Fraction = Fraction(1, 10**6)) -> Fraction:
    x = Fraction(x)
    if x <= 0:
        return Fraction(0)
    lo, hi = Fraction(0), max(Fraction(1), x)
    while hi - lo > tol:
        mid = (lo + hi) / 2
        if mid * mid >= x:
            hi = mid
        else:
            lo = mid
    return lo


def frobenius_squared(m: Sequence[Sequence[Number]]) -> Fraction:
    total = Fraction(0)
    for row in m:
        for v in row:
            v = Fraction(v)
            if v < 0:
                raise ValueError("bound matrix entries must be >= 0")
            total += v * v
    return total


def frobenius_norm_bound(m: Sequence[Sequence[Number]],
                         tol: Fraction = Fraction(1, 10**6)) -> Fraction:
    """Rational upper bound on the Frobenius norm of a nonnegative matrix."""
    return sqrt_upper(frobenius_squared(m), tol)


def matvec(m: Sequence[Sequence[Number]], v: Sequence[Number]) -> tuple:
    return tuple(sum((Fraction(a) * Fraction(b) for a, b in zip(row, v)), Fraction(0)) for row in m)

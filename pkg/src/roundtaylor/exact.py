"""Exact rational core: floors, grid rounding and the ``num/den`` text format.

``fractions.Fraction`` is the rational type everywhere; it is always kept in
lowest terms with a positive denominator.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from decimal import Decimal, InvalidOperation
from fractions import Fraction
from typing import Iterable, Sequence

Rational = Fraction
RationalVector = tuple  # tuple[Fraction, ...]


def floor_rational(x: Fraction) -> int:
    """Largest integer not exceeding ``x`` (toward -inf for negatives)."""
    return x.numerator // x.denominator


@dataclass(frozen=True)
class GridSpec:
    """Rounding grid ``R * Z``. A resolution of zero means no rounding."""

    resolution: Fraction

    def __post_init__(self) -> None:
        object.__setattr__(self, "resolution", Fraction(self.resolution))
        if self.resolution < 0:
            raise ValueError("grid resolution must be >= 0")

    @property
    def rounds(self) -> bool:
        return self.resolution > 0

    def floor_index(self, y: Fraction) -> int:
        """``floor(y / R)`` computed with integer arithmetic only."""
        r = self.resolution
        return (y.numerator * r.denominator) // (y.denominator * r.numerator)

    def point(self, index: int) -> Fraction:
        return self.resolution * index


TEN_DECIMALS = GridSpec(Fraction(1, 10**10))


def round_to_grid(y: Fraction, grid: GridSpec) -> Fraction:
    """Return ``R * floor(y / R)``."""
    if not grid.rounds:
        raise ValueError("round_to_grid needs a positive resolution")
    return grid.point(grid.floor_index(Fraction(y)))


def round_vector_to_grid(y: Sequence[Fraction], grid: GridSpec) -> tuple:
    return tuple(round_to_grid(c, grid) for c in y)


def on_grid(y: Fraction, grid: GridSpec) -> bool:
    return (Fraction(y) / grid.resolution).denominator == 1


_RATIONAL_RE = re.compile(r"^\s*([+-]?\d+)\s*/\s*(\d+)\s*$")


def parse_rational(text: str | int | Fraction) -> Fraction:
    """Parse ``"num/den"``, an integer or a decimal literal exactly.

    Decimals are read as exact rationals, so ``"0.3966"`` is ``3966/10000``;
    scientific notation (``"1e-10"``) is accepted too.
    """
    if isinstance(text, (int, Fraction)):
        return Fraction(text)
    m = _RATIONAL_RE.match(text)
    if m:
        den = int(m.group(2))
        if den == 0:
            raise ValueError(f"zero denominator in {text!r}")
        return Fraction(int(m.group(1)), den)
    try:
        return Fraction(Decimal(text.strip()))
    except (InvalidOperation, ValueError, OverflowError) as exc:
        raise ValueError(f"not an exact rational literal: {text!r}") from exc


def format_rational(x: Fraction) -> str:
    """Serialize as ``"num/den"`` (integers keep the ``/1``)."""
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def format_vector(v: Iterable[Fraction]) -> list[str]:
    return [format_rational(c) for c in v]


def decimal_preview(x: Fraction, digits: int = 12) -> str:
    """Truncated decimal rendering, for humans only (not exact)."""
    x = Fraction(x)
    sign = "-" if x < 0 else ""
    x = abs(x)
    scaled = floor_rational(x * 10**digits)
    whole, frac = divmod(scaled, 10**digits)
    if digits == 0:
        return f"{sign}{whole}"
    return f"{sign}{whole}.{frac:0{digits}d}"

"""Recorded inequalities: every verified claim carries lhs, rhs and slack."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .exact import decimal_preview, format_rational

_RELATIONS = {
    "<": lambda a, b: a < b,
    "<=": lambda a, b: a <= b,
    ">": lambda a, b: a > b,
    ">=": lambda a, b: a >= b,
    "==": lambda a, b: a == b,
}


@dataclass(frozen=True)
class Inequality:
    name: str
    lhs: Fraction
    relation: str
    rhs: Fraction
    note: str = ""

    def __post_init__(self) -> None:
        if self.relation not in _RELATIONS:
            raise ValueError(f"unknown relation {self.relation!r}")
        object.__setattr__(self, "lhs", Fraction(self.lhs))
        object.__setattr__(self, "rhs", Fraction(self.rhs))

    @property
    def holds(self) -> bool:
        return _RELATIONS[self.relation](self.lhs, self.rhs)

    @property
    def slack(self) -> Fraction:
        if self.relation in ("<", "<="):
            return self.rhs - self.lhs
        if self.relation in (">", ">="):
            return self.lhs - self.rhs
        return -abs(self.lhs - self.rhs)

    def to_json(self) -> dict:
        out = {
            "name": self.name,
            "lhs": format_rational(self.lhs),
            "relation": self.relation,
            "rhs": format_rational(self.rhs),
            "slack": format_rational(self.slack),
            "holds": self.holds,
            "approx (non-exact)": f"{decimal_preview(self.lhs, 10)} {self.relation} "
                                  f"{decimal_preview(self.rhs, 10)}",
        }
        if self.note:
            out["note"] = self.note
        return out


@dataclass
class Report:
    name: str
    checks: list = field(default_factory=list)
    info: list = field(default_factory=list)  # recorded but not gating
    notes: list = field(default_factory=list)
    data: dict = field(default_factory=dict)

    def add(self, name: str, lhs, relation: str, rhs, note: str = "") -> Inequality:
        c = Inequality(name, lhs, relation, rhs, note)
        self.checks.append(c)
        return c

    def add_info(self, name: str, lhs, relation: str, rhs, note: str = "") -> Inequality:
        c = Inequality(name, lhs, relation, rhs, note)
        self.info.append(c)
        return c

    @property
    def passed(self) -> bool:
        return all(c.holds for c in self.checks)

    def failures(self) -> list:
        return [c for c in self.checks if not c.holds]

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "passed": self.passed,
            "checks": [c.to_json() for c in self.checks],
            "informational": [c.to_json() for c in self.info],
            "notes": list(self.notes),
        }

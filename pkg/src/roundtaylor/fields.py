"""Vector fields for the RTM stepper.

Two fields are registered:

``cmc-s4``
    The profile-curve system for a CMC hypertorus in S^4 with H = -3,
    state ``u = (r, theta, alpha)``::

        r'     = cos(alpha)
        theta' = sin(alpha) / sin(r)
        alpha' = 2 cot(2 theta) cos(alpha) / sin(r) - 3 cot(r) sin(alpha) - 3

    written through the six building blocks
    ``g1 = cos u3, g2 = sin u3, g3 = csc u1, g4 = cot u1, g5 = cot 2u2,
    g6 = csc^2 2u2``.

``logistic-demo``
    ``y' = y - y**2/3``, polynomial with rational coefficients, so it can be
    integrated with no rounding at all.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial
from typing import Callable, Optional, Sequence

from .enclosure import Ball, monotone_range, PrecisionRequest, sincos_ball
from .interval import Box, RationalInterval, as_interval

# point(u, order, prec) -> [F_0(u), ..., F_{order-1}(u)], each a list of n
# RationalIntervals (point intervals for exact fields).
PointTerms = Callable[[Sequence[Fraction], int, int], list]


@dataclass(frozen=True)
class VectorFieldDef:
    name: str
    dim: int
    exact_rational: bool
    point_terms: PointTerms
    max_order: Optional[int] = None
    box_terms: Optional[Callable[[Box, PrecisionRequest], dict]] = None
    description: str = ""
    # optional fixed-point evaluator of f used by the stepper's integer fast path
    point_balls: Optional[Callable[[Sequence[Fraction], int], list]] = None

    def enclose_f(self, u: Sequence[Fraction], prec: int = 96) -> list:
        return self.point_terms(u, 1, prec)[0]


# --- CMC system --------------------------------------------------------------

def cmc_f_from_g(g1, g2, g3, g4, g5):
    """f in terms of the building blocks; works on Balls and intervals alike."""
    return [g1, g2 * g3, -3 * (g2 * g4) + 2 * (g1 * g3 * g5) - 3]


def cmc_jacobian_from_g(g1, g2, g3, g4, g5, g6):
    """Symbolic Jacobian of the CMC field, rows d f_i / d u_j."""
    zero = 0 * g1
    return [
        [zero, zero, -g2],
        [-(g2 * g3 * g4), zero, g1 * g3],
        [g3 * (3 * (g2 * g3) - 2 * (g1 * g4 * g5)), -4 * (g1 * g3 * g6),
         -3 * (g1 * g4) - 2 * (g2 * g3 * g5)],
    ]


def cmc_g_point(u: Sequence[Fraction], prec: int) -> tuple:
    """Ball enclosures of (g1, ..., g5) at a rational point."""
    u1, u2, u3 = u
    s1, c1 = sincos_ball(u1, prec)
    s3, c3 = sincos_ball(u3, prec)
    s2, c2 = sincos_ball(2 * u2, prec)
    g3 = 1 / s1
    return c3, s3, g3, c1 / s1, c2 / s2


def cmc_f_balls(u: Sequence[Fraction], prec: int) -> list[Ball]:
    return cmc_f_from_g(*cmc_g_point(u, prec))


def cmc_f_enclose(u: Sequence[Fraction], prec: int = 96) -> list[RationalInterval]:
    """Enclosure of f(u) for the CMC system.

    Raises PoleProximityError when sin(u1) or sin(2 u2) cannot be separated
    from zero at this precision.
    """
    return [b.to_interval() for b in cmc_f_balls([Fraction(c) for c in u], prec)]


def _cmc_point_terms(u, order, prec):
    if order != 1:
        raise NotImplementedError("cmc-s4 only provides F_0 = f (order m = 1)")
    return [[b.to_interval() for b in cmc_f_balls(u, prec)]]


CMC_G_SPECS = (
    # (name, function id, state axis, argument scale)
    ("g1", "cos", 2, 1),
    ("g2", "sin", 2, 1),
    ("g3", "csc", 0, 1),
    ("g4", "cot", 0, 1),
    ("g5", "cot", 1, 2),
    ("g6", "csc2", 1, 2),
)


def cmc_g_ranges(box: Box, req: PrecisionRequest) -> dict:
    out = {}
    for name, fn, axis, scale in CMC_G_SPECS:
        dom = box[axis]
        out[name] = monotone_range(fn, RationalInterval(dom.lo * scale, dom.hi * scale), req)
    return out


def cmc_box_terms(box: Box, req: PrecisionRequest) -> dict:
    """Rigorous ranges of g, f, Df and F1 = Df f over a box."""
    g = cmc_g_ranges(box, req)
    gs = [g[f"g{i}"] for i in range(1, 7)]
    f = cmc_f_from_g(*gs[:5])
    jac = [[as_interval(e) for e in row] for row in cmc_jacobian_from_g(*gs)]
    F1 = [sum((jac[i][j] * f[j] for j in range(3)), as_interval(0)) for i in range(3)]
    return {"g": g, "f": f, "jacobian": jac, "F1": F1}


def cmc_field() -> VectorFieldDef:
    return VectorFieldDef(
        name="cmc-s4",
        dim=3,
        exact_rational=False,
        point_terms=_cmc_point_terms,
        max_order=1,
        box_terms=cmc_box_terms,
        point_balls=cmc_f_balls,
        description="profile ODE of a CMC (H=-3) hypertorus in S^4",
    )


# --- polynomial fields ---------------------------------------------------------

def _poly_eval(coeffs: Sequence[Fraction], x):
    acc = 0 * x if not isinstance(x, Fraction) else Fraction(0)
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def _poly_mul(a, b):
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def _poly_deriv(a):
    return [i * c for i, c in enumerate(a)][1:] or [Fraction(0)]


@dataclass
class ScalarPolynomialField:
    """Autonomous scalar field y' = p(y) with the Taylor tower F_q = F_{q-1}' p."""

    coeffs: list
    _tower: list = field(default_factory=list)

    def __post_init__(self) -> None:
        self.coeffs = [Fraction(c) for c in self.coeffs]
        self._tower = [self.coeffs]

    def tower(self, order: int) -> list:
        while len(self._tower) < order + 1:
            last = self._tower[-1]
            self._tower.append(_poly_mul(_poly_deriv(last), self.coeffs))
        return self._tower[: order + 1]

    def term(self, q: int) -> list:
        return self.tower(q)[q]

    def eval_term(self, q: int, y):
        return _poly_eval(self.term(q), y)

    def eval_term_deriv(self, q: int, y):
        return _poly_eval(_poly_deriv(self.term(q)), y)

    def point_terms(self, u, order, prec):
        y = Fraction(u[0])
        return [[RationalInterval.point(self.eval_term(q, y))] for q in range(order)]

    def box_terms(self, box: Box, req: PrecisionRequest, order: int = 1) -> dict:
        """Interval ranges of F_q and DF_q over a 1-D box (naive Horner)."""
        y = box[0]
        terms = [_poly_eval(self.term(q), y) for q in range(order + 1)]
        derivs = [_poly_eval(_poly_deriv(self.term(q)), y) for q in range(order)]
        return {"F": [as_interval(t) for t in terms], "DF": [as_interval(d) for d in derivs]}


LOGISTIC = ScalarPolynomialField([0, 1, Fraction(-1, 3)])


def logistic_demo_field() -> VectorFieldDef:
    return VectorFieldDef(
        name="logistic-demo",
        dim=1,
        exact_rational=True,
        point_terms=LOGISTIC.point_terms,
        box_terms=lambda box, req: LOGISTIC.box_terms(box, req),
        description="y' = y - y^2/3",
    )


def polynomial_field(name: str, coeffs: Sequence) -> VectorFieldDef:
    p = ScalarPolynomialField(list(coeffs))
    return VectorFieldDef(name=name, dim=1, exact_rational=True, point_terms=p.point_terms,
                          box_terms=lambda box, req: p.box_terms(box, req))


def logistic_exact_solution(y0: Fraction):
    """Closed form of y' = y - y^2/3 as a function of mpmath time (oracle use)."""
    import mpmath

    c = 3 / mpmath.mpf(y0.numerator) * y0.denominator - 1

    def y(t):
        return 3 / (1 + c * mpmath.exp(-t))

    return y


FIELDS: dict[str, Callable[[], VectorFieldDef]] = {
    "cmc-s4": cmc_field,
    "logistic-demo": logistic_demo_field,
}


def get_field(name: str) -> VectorFieldDef:
    try:
        return FIELDS[name]()
    except KeyError:
        raise KeyError(f"unknown field {name!r}; known: {sorted(FIELDS)}") from None


def taylor_coefficients(h: Fraction, order: int) -> list[Fraction]:
    """h**q / q! for q = 1..order."""
    return [Fraction(h) ** q / factorial(q) for q in range(1, order + 1)]

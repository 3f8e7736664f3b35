"""Round Taylor method over exact rationals, with rigorous enclosures and an
existence certificate for a CMC hypertorus in S^4."""

from fractions import Fraction

from .enclosure import (enclose_cos, enclose_cot, enclose_csc, enclose_exp, enclose_pi,
                        enclose_sin, floor_of_enclosed, monotone_range, PrecisionRequest)
from .exact import GridSpec, floor_rational, round_to_grid, round_vector_to_grid
from .interval import Box, RationalInterval
from .rtm import BoundSet, RTMConfig, compute_error_bound, rtm_run, rtm_step

ExactRational = Fraction

__version__ = "0.1.0"

"""Unrounded Euler on y' = y - y^2/3, y(0) = 1/2, h = 1/100.

Prints the size of y_n for the first steps and where the 37-digit rational
quoted alongside the method shows up in the sequence.  The digit count
roughly doubles per step, which is the point of rounding to a grid.
"""

import math
from fractions import Fraction

from roundtaylor.reference import EULER_QUOTED

H = Fraction(1, 100)


def main(steps: int = 16) -> None:
    y = Fraction(1, 2)
    for n in range(1, steps + 1):
        y = y + H * (y - y * y / 3)
        digits = math.ceil(y.denominator.bit_length() * math.log10(2))
        mark = "  <- quoted rational" if y == EULER_QUOTED else ""
        print(f"y_{n:<2d} ~ {float(y):.15f}   denominator ~{digits} digits{mark}")
    print("\nthe sequence increases strictly on (0, 3), so later steps never return to it")


if __name__ == "__main__":
    main()

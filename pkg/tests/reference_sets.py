"""Hand-typed state lists, independent of the package builders, used as oracles."""

import re
from fractions import Fraction

from loccdisc.linalg import Ket, SystemLayout

# (4,5) bipartite example, one "A-factor B-factor" pair per state
BIPARTITE_45 = [
    "1+2+3+4 1+2+3+4+5",
    "2 1-2", "3 1-3", "4 1-4", "1-4 2",
    "1-2 3", "1-3 4", "1-2 5", "4 3-5",
]

# 4 x 5 x 6 example, "C B A" factors
TRIPARTITE_456 = [
    "1+2+3+4 1+2+3+4+5 1+2+3+4+5+6",
    "4 2 1-2", "4 3 1-3", "4 4 1-4", "4 5 1-5",
    "4 1-5 2", "4 1-2 3", "4 1-3 4", "4 1-4 5",
    "4 5 3-6", "4 1-2 6", "3 1-2 6", "2 1-2 6",
    "1 1-2 6", "1-2 4 6", "2-3 5 6", "3-4 4 6",
]

# after Bob's resource projection: A-factor, then (B, a, b, sign) terms
RESOURCE_45 = {
    "phi1": ("1+2+3+4", [(i, i, i, 1) for i in range(1, 6)]),
    "phi2": ("2", [(1, 1, 1, 1), (2, 2, 2, -1)]),
    "phi3": ("3", [(1, 1, 1, 1), (3, 3, 3, -1)]),
    "phi4": ("4", [(1, 1, 1, 1), (4, 4, 4, -1)]),
    "phi5": ("1-4", [(2, 2, 2, 1)]),
    "phi6": ("1-2", [(3, 3, 3, 1)]),
    "phi7": ("1-3", [(4, 4, 4, 1)]),
    "phi8": ("1-2", [(5, 5, 5, 1)]),
    "phi9": ("4", [(3, 3, 3, 1), (5, 5, 5, -1)]),
}


def parse_factor(s: str) -> dict:
    out = {}
    for sign, i in re.findall(r"([+-]?)(\d+)", s):
        out[int(i)] = Fraction(-1 if sign == "-" else 1)
    return out


def product(layout: SystemLayout, text: str) -> Ket:
    amps = {(): Fraction(1)}
    for f in text.split():
        amps = {z + (i,): v * c for z, v in amps.items() for i, c in parse_factor(f).items()}
    return Ket(layout, amps)


def resource_image(layout: SystemLayout, a_text: str, terms) -> Ket:
    """Ket on ``(A, B, a, b)`` from an A-factor and ``(B, a, b, sign)`` terms."""
    amps = {}
    for i, c in parse_factor(a_text).items():
        for b, x, y, sign in terms:
            amps[(i, b, x, y)] = c * sign
    return Ket(layout, amps)

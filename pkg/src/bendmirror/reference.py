"""Reference potentials stored as plain text.

These are regression anchors only; nothing in the library computes from
them.  Each entry is a plain-text Laurent expression read by
:func:`bendmirror.exactalg.parse_laurent`.
"""

from __future__ import annotations

from typing import Dict

from .exactalg import LaurentPoly, parse_laurent

# Sum of p_{i,i+2} for the pentagon.
PENTAGON_W_BEND = "p13 + p24 + p35 + p14 + p25"

# Caterpillar chart {13,14,15,16} of the heptagon.
HEPTAGON_CATERPILLAR = (
    "p13 + 2/p13 + p16 + 2/p16 + p13/p14 + p14/p13 + 1/(p13*p14)"
    " + p14/p15 + p15/p14 + 1/(p14*p15) + p15/p16 + p16/p15 + 1/(p15*p16)"
)

# The chart {13,14,46,16}, one flip away at the diagonal 1-5.
HEPTAGON_FLIPPED = (
    "p13 + 2/p13 + p16 + 2/p16 + p14/p13 + p13/p14 + 1/(p13*p14)"
    " + p46 + 2/p46 + p16/(p14*p46) + p14/(p16*p46) + p46/(p14*p16)"
)

# Caterpillar potential at n = 2, in the order it is usually written.
N2_FORMULA = "z1 + 2/z1 + z2 + 2/z2 + z1/z2 + z2/z1 + 1/(z1*z2)"

# The reduced GZ potential at n = 2, term by term before collecting.
N2_GZ_REDUCED = "1/z1 + 1/(z1*z2) + 1/z2 + 1/z1 + z1/z2 + z2 + z1 + z2/z1 + 1/z2"

# Unreduced GZ potential at n = 2.
N2_GZ = (
    "y1_1/y1_2 + y2_1/y2_2 + y3_1/y3_2 + y2_1/y1_1 + y3_1/y2_1 + 1/y3_1"
    " + y1_2 + y2_2/y1_2 + y3_2/y2_2"
)

# Ansatz with symbolic slots at n = 2.
N2_ANSATZ = "z1 + z2 + kappa1/z1 + kappa2/z2 + z1/z2 + z2/z1 + 1/(z1*z2)"

PENTAGON = {
    "1,1,3,3,3": "y1 + y2/y1 + 2/y1 + 1/(y1*y2)",
    "1,1,3,2,2": "y1 + y2/y1 + 2/y1 + 1/(y1*y2) + y2",
    "2,2,2,4,4": "y1 + y2/y1 + 2/y1 + 1/(y1*y2) + 2/y2 + y1/y2",
}

S2_MODEL_KAPPA2 = "y1 + 1/(y1*y2) + y2/y1 + 2/y1"
SO3_MODEL_KAPPA0 = "y2 + y3/y2 + y1/y2 + 1/(y1*y2) + 1/(y2*y3)"


def reference(name: str) -> LaurentPoly:
    return parse_laurent(globals()[name])


def pentagon_reference() -> Dict[str, LaurentPoly]:
    return {k: parse_laurent(v) for k, v in PENTAGON.items()}

"""Monomial tables for the quartic symmetry-deviation polynomial.

The deviation measure is a homogeneous 4th-degree polynomial in the seven
octupole coefficients (index order m = -3..3).  It is stored here as an
explicit monomial list so that every backend evaluates exactly the same
terms and so the table can be audited term by term.

Each entry is ``(integer coefficient, sqrt15 flag, exponent 7-tuple)``;
the working coefficient is ``integer * sqrt(15)`` when the flag is set.
sqrt(15) is taken at full double precision.
"""

from __future__ import annotations

import math

import numpy as np

SQRT15 = math.sqrt(15.0)

# (coefficient, multiplied-by-sqrt15, exponents of a_{-3}..a_{3})
DEVIATION_MONOMIALS = (
    (25, False, (4, 0, 0, 0, 0, 0, 0)),
    (50, False, (2, 2, 0, 0, 0, 0, 0)),
    (20, True, (1, 2, 1, 0, 0, 0, 0)),
    (-10, False, (2, 0, 2, 0, 0, 0, 0)),
    (30, False, (0, 2, 2, 0, 0, 0, 0)),
    (8, True, (1, 0, 3, 0, 0, 0, 0)),
    (21, False, (0, 0, 4, 0, 0, 0, 0)),
    (-40, False, (2, 0, 0, 2, 0, 0, 0)),
    (80, False, (0, 2, 0, 2, 0, 0, 0)),
    (32, False, (0, 0, 2, 2, 0, 0, 0)),
    (16, False, (0, 0, 0, 4, 0, 0, 0)),
    (120, False, (1, 1, 0, 1, 1, 0, 0)),
    (-16, True, (0, 1, 1, 1, 1, 0, 0)),
    (-10, False, (2, 0, 0, 0, 2, 0, 0)),
    (30, False, (0, 2, 0, 0, 2, 0, 0)),
    (-24, True, (1, 0, 1, 0, 2, 0, 0)),
    (42, False, (0, 0, 2, 0, 2, 0, 0)),
    (32, False, (0, 0, 0, 2, 2, 0, 0)),
    (21, False, (0, 0, 0, 0, 4, 0, 0)),
    (120, False, (1, 0, 1, 1, 0, 1, 0)),
    (8, True, (0, 0, 2, 1, 0, 1, 0)),
    (40, True, (1, 1, 0, 0, 1, 1, 0)),
    (-8, True, (0, 0, 0, 1, 2, 1, 0)),
    (50, False, (2, 0, 0, 0, 0, 2, 0)),
    (-20, True, (1, 0, 1, 0, 0, 2, 0)),
    (30, False, (0, 0, 2, 0, 0, 2, 0)),
    (80, False, (0, 0, 0, 2, 0, 2, 0)),
    (30, False, (0, 0, 0, 0, 2, 2, 0)),
    (-120, False, (0, 1, 1, 1, 0, 0, 1)),
    (-20, True, (0, 2, 0, 0, 1, 0, 1)),
    (24, True, (0, 0, 2, 0, 1, 0, 1)),
    (-8, True, (0, 0, 0, 0, 3, 0, 1)),
    (40, True, (0, 1, 1, 0, 0, 1, 1)),
    (120, False, (0, 0, 0, 1, 1, 1, 1)),
    (20, True, (0, 0, 0, 0, 1, 2, 1)),
    (50, False, (2, 0, 0, 0, 0, 0, 2)),
    (50, False, (0, 2, 0, 0, 0, 0, 2)),
    (-10, False, (0, 0, 2, 0, 0, 0, 2)),
    (-40, False, (0, 0, 0, 2, 0, 0, 2)),
    (-10, False, (0, 0, 0, 0, 2, 0, 2)),
    (50, False, (0, 0, 0, 0, 0, 2, 2)),
    (25, False, (0, 0, 0, 0, 0, 0, 4)),
)


def _coefficient(entry) -> float:
    c, with_sqrt15, _ = entry
    return c * SQRT15 if with_sqrt15 else float(c)


DEVIATION_COEFFS = np.array([_coefficient(e) for e in DEVIATION_MONOMIALS])
DEVIATION_EXPONENTS = np.array(
    [e for _, _, e in DEVIATION_MONOMIALS], dtype=np.int32
)

assert all(sum(e) == 4 for _, _, e in DEVIATION_MONOMIALS)


def _gradient_tables():
    """Differentiate the monomial list once, per variable.

    Returns, for each of the seven coordinates, a coefficient vector and an
    exponent matrix describing d(deviation)/d(a_m) as its own monomial list.
    """
    coeffs = []
    exponents = []
    for m in range(7):
        cs = []
        es = []
        for entry in DEVIATION_MONOMIALS:
            _, _, exps = entry
            if exps[m] == 0:
                continue
            cs.append(_coefficient(entry) * exps[m])
            reduced = list(exps)
            reduced[m] -= 1
            es.append(reduced)
        coeffs.append(np.array(cs))
        exponents.append(np.array(es, dtype=np.int32))
    return tuple(coeffs), tuple(exponents)


GRADIENT_COEFFS, GRADIENT_EXPONENTS = _gradient_tables()

DEVIATION_COEFFS.setflags(write=False)
DEVIATION_EXPONENTS.setflags(write=False)
for _c, _e in zip(GRADIENT_COEFFS, GRADIENT_EXPONENTS):
    _c.setflags(write=False)
    _e.setflags(write=False)

"""Pure-numpy kernels: reference implementation of the hot loops.

The compiled extension (``octaframe._kernels``) implements the same
functions with identical semantics; either module can back the public API.
All inputs are float64 arrays, octupoles are rows of shape (7,).

Powers are built by cumulative multiplication (never ``**``) so that
negating an input vector changes every intermediate only by an exact sign
flip; together with the even total degree of the polynomial this makes
``penalty_batch`` and ``field_energy`` bit-exactly invariant under
octupole sign flips.
"""

from __future__ import annotations

import numpy as np

from ._poly import (
    DEVIATION_COEFFS,
    DEVIATION_EXPONENTS,
    GRADIENT_COEFFS,
    GRADIENT_EXPONENTS,
)

BACKEND_NAME = "python"

_COLS = np.arange(7)


def _powers(a: np.ndarray) -> np.ndarray:
    """Stack a^0..a^4 per entry: (n, 7) -> (n, 7, 5)."""
    p = np.empty(a.shape + (5,))
    p[..., 0] = 1.0
    p[..., 1] = a
    p[..., 2] = p[..., 1] * a
    p[..., 3] = p[..., 2] * a
    p[..., 4] = p[..., 3] * a
    return p


def _monomials(powers: np.ndarray, exponents: np.ndarray) -> np.ndarray:
    """Evaluate a monomial table: (n,7,5) powers, (k,7) exponents -> (n,k)."""
    return np.prod(powers[:, _COLS, exponents[:, _COLS]], axis=2)


def deviation_batch(a: np.ndarray) -> np.ndarray:
    a = np.atleast_2d(np.asarray(a, dtype=np.float64))
    return _monomials(_powers(a), DEVIATION_EXPONENTS) @ DEVIATION_COEFFS


def deviation_gradient_batch(a: np.ndarray) -> np.ndarray:
    a = np.atleast_2d(np.asarray(a, dtype=np.float64))
    p = _powers(a)
    out = np.empty_like(a)
    for m in range(7):
        out[:, m] = _monomials(p, GRADIENT_EXPONENTS[m]) @ GRADIENT_COEFFS[m]
    return out


def penalty_batch(a: np.ndarray, w1: float, w2: float) -> np.ndarray:
    a = np.atleast_2d(np.asarray(a, dtype=np.float64))
    scale = np.einsum("ij,ij->i", a, a) - 1.0
    return w1 * scale * scale + w2 * deviation_batch(a)


def penalty_gradient_batch(a: np.ndarray, w1: float, w2: float) -> np.ndarray:
    a = np.atleast_2d(np.asarray(a, dtype=np.float64))
    scale = np.einsum("ij,ij->i", a, a) - 1.0
    return (4.0 * w1) * scale[:, None] * a + w2 * deviation_gradient_batch(a)


def smoothness_batch(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Sign-agnostic edge terms |a-b|^2 |a+b|^2 for paired rows."""
    d = a - b
    s = a + b
    return np.einsum("ij,ij->i", d, d) * np.einsum("ij,ij->i", s, s)


def field_energy(
    values: np.ndarray, edges: np.ndarray, w1: float, w2: float
) -> float:
    smooth = 0.0
    if len(edges):
        smooth = float(
            np.sum(smoothness_batch(values[edges[:, 0]], values[edges[:, 1]]))
        )
    return smooth + float(np.sum(penalty_batch(values, w1, w2)))


def field_gradient(
    values: np.ndarray,
    edges: np.ndarray,
    pinned: np.ndarray,
    w1: float,
    w2: float,
) -> np.ndarray:
    grad = penalty_gradient_batch(values, w1, w2)
    pinned = np.asarray(pinned, dtype=bool)
    if len(edges):
        i, j = edges[:, 0], edges[:, 1]
        a, b = values[i], values[j]
        d = a - b
        s = a + b
        d2 = np.einsum("ij,ij->i", d, d)[:, None]
        s2 = np.einsum("ij,ij->i", s, s)[:, None]
        # d/da |a-b|^2 |a+b|^2 = 2|a+b|^2 (a-b) + 2|a-b|^2 (a+b)
        edge_grad = 2.0 * s2 * d + 2.0 * d2 * s
        np.add.at(grad, i, edge_grad)
        # d/db is the same expression with the difference negated
        np.add.at(grad, j, -2.0 * s2 * d + 2.0 * d2 * s)
    grad[pinned] = 0.0
    return grad

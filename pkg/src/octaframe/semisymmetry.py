"""Quadric constraints of the semisymmetric manifold and the deviation penalty.

A unit octupole is *semisymmetric* (invariant under the even octahedral
rotations, negated by the odd ones) exactly when three quadratic forms
vanish: a^T M_k a = 0 for the constant matrices ``M1``, ``M2``, ``M3``
below.  ``deviation`` is the rotation-invariant quartic polynomial that
measures how far an arbitrary octupole is from satisfying them; it equals
the average of the (non-invariant) ``trial_deviation`` over all rotations,
which ``so3_average_trial`` computes by numeric quadrature as an
independent cross-check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import sh3
from .backend import kernels

__all__ = [
    "M1",
    "M2",
    "M3",
    "QUADRICS",
    "PenaltyWeights",
    "DEFAULT_WEIGHTS",
    "So3Quadrature",
    "quadric_residuals",
    "deviation",
    "deviation_gradient",
    "trial_deviation",
    "so3_average_trial",
    "penalty",
    "penalty_gradient",
]


def _symmetric(entries) -> np.ndarray:
    m = np.zeros((7, 7))
    for i, j, value in entries:
        m[i, j] = value
        m[j, i] = value
    m.setflags(write=False)
    return m


_SQRT15 = math.sqrt(15.0)

M1 = _symmetric(
    [(0, 0, -5.0), (2, 2, 3.0), (3, 3, 4.0), (4, 4, 3.0), (6, 6, -5.0)]
)
M2 = _symmetric(
    [(0, 1, 5.0), (1, 2, _SQRT15), (3, 4, 2.0), (4, 5, _SQRT15), (5, 6, 5.0)]
)
M3 = _symmetric(
    [(0, 5, 5.0), (1, 4, _SQRT15), (1, 6, -5.0), (2, 3, 2.0), (2, 5, -_SQRT15)]
)

QUADRICS = (M1, M2, M3)


def quadric_residuals(a) -> np.ndarray:
    """(a^T a - 1, a^T M1 a, a^T M2 a, a^T M3 a); all zero iff a is a
    unit-norm semisymmetric octupole."""
    a = np.asarray(a, dtype=np.float64)
    return np.array(
        [a @ a - 1.0, a @ M1 @ a, a @ M2 @ a, a @ M3 @ a]
    )


def deviation(a) -> float:
    """Rotation-invariant deviation from semisymmetry (homogeneous quartic).

    Zero on the manifold and its scalings; e.g. d of the reference is 0
    while d(e_-3) = 25.
    """
    a = np.ascontiguousarray(a, dtype=np.float64).reshape(1, 7)
    return float(kernels.deviation_batch(a)[0])


def deviation_gradient(a) -> np.ndarray:
    """Analytic gradient of ``deviation`` (degree-3 homogeneous)."""
    a = np.ascontiguousarray(a, dtype=np.float64).reshape(1, 7)
    return kernels.deviation_gradient_batch(a)[0]


def trial_deviation(a) -> float:
    """Sum of squared quadric residuals (norm residual excluded).

    Not rotation-invariant by itself; its Haar average over SO(3) is
    ``deviation``.
    """
    r = quadric_residuals(a)
    return float(r[1] * r[1] + r[2] * r[2] + r[3] * r[3])


@dataclass(frozen=True)
class PenaltyWeights:
    """Positive weights of the penalty: w1 scales the unit-norm term,
    w2 the symmetry (deviation) term."""

    w1: float = 5.0
    w2: float = 2.5

    def __post_init__(self):
        if not (self.w1 > 0.0 and self.w2 > 0.0):
            raise ValueError(f"penalty weights must be positive, got {self}")


DEFAULT_WEIGHTS = PenaltyWeights()


def penalty(a, w: PenaltyWeights = DEFAULT_WEIGHTS) -> float:
    """p(a; w1, w2) = w1 (a^T a - 1)^2 + w2 d(a); zero iff a is a unit-norm
    semisymmetric octupole."""
    a = np.asarray(a, dtype=np.float64)
    s = a @ a - 1.0
    return float(w.w1 * s * s + w.w2 * deviation(a))


def penalty_gradient(a, w: PenaltyWeights = DEFAULT_WEIGHTS) -> np.ndarray:
    """Analytic gradient: 4 w1 (a^T a - 1) a + w2 grad d."""
    a = np.asarray(a, dtype=np.float64)
    return 4.0 * w.w1 * (a @ a - 1.0) * a + w.w2 * deviation_gradient(a)


class So3Quadrature:
    """Quadrature for Haar averages over the rotation group.

    Rotations are sampled as Rz(alpha) Rx(beta) Rz(gamma) with trapezoid
    (equal-weight periodic) nodes in alpha and gamma and Gauss-Legendre
    nodes in cos(beta), which absorbs the sin(beta) factor of the measure.
    The integrand produced by ``so3_average_trial`` is a trigonometric
    polynomial of degree <= 12 per periodic angle, so 32 trapezoid points
    integrate it exactly and 32 Gauss nodes are far beyond sufficient.
    """

    MIN_NODES = 16

    def __init__(self, n_alpha: int = 32, n_beta: int = 32, n_gamma: int = 32):
        for name, n in (("n_alpha", n_alpha), ("n_beta", n_beta), ("n_gamma", n_gamma)):
            if n < self.MIN_NODES:
                raise ValueError(f"{name} must be >= {self.MIN_NODES}, got {n}")
        self.n_alpha = int(n_alpha)
        self.n_beta = int(n_beta)
        self.n_gamma = int(n_gamma)
        self._rotations = None
        self._weights = None

    def _build(self):
        alphas = 2.0 * math.pi * np.arange(self.n_alpha) / self.n_alpha
        gammas = 2.0 * math.pi * np.arange(self.n_gamma) / self.n_gamma
        t, w_t = np.polynomial.legendre.leggauss(self.n_beta)
        betas = np.arccos(t)

        rz_a = sh3._rotation_z_stack(alphas)
        rx_b = sh3._rotation_x_stack(betas)
        rz_g = sh3._rotation_z_stack(gammas)
        ab = np.einsum("aij,bjk->abik", rz_a, rx_b)
        rot = np.einsum("abik,ckl->abcil", ab, rz_g)
        self._rotations = rot.reshape(-1, 7, 7)

        w = np.einsum(
            "a,b,c->abc",
            np.full(self.n_alpha, 1.0 / self.n_alpha),
            w_t / 2.0,
            np.full(self.n_gamma, 1.0 / self.n_gamma),
        )
        self._weights = w.reshape(-1)

    @property
    def rotations(self) -> np.ndarray:
        """(N, 7, 7) stack of sampled harmonic rotations (built lazily)."""
        if self._rotations is None:
            self._build()
        return self._rotations

    @property
    def weights(self) -> np.ndarray:
        """(N,) normalized weights summing to 1."""
        if self._weights is None:
            self._build()
        return self._weights


_DEFAULT_QUADRATURE = So3Quadrature()


def so3_average_trial(a, q: So3Quadrature | None = None) -> float:
    """Haar average of ``trial_deviation`` over the orbit of ``a``.

    Agrees with ``deviation(a)`` to ~1e-14 at the default quadrature; the
    agreement is this package's numerical proof that ``deviation`` really
    is the orbit average of the trial measure.
    """
    if q is None:
        q = _DEFAULT_QUADRATURE
    a = np.asarray(a, dtype=np.float64)
    orbit = q.rotations @ a
    total = np.zeros_like(q.weights)
    for m in QUADRICS:
        r = np.einsum("ni,ij,nj->n", orbit, m, orbit)
        total += r * r
    return float(total @ q.weights)

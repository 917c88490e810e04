"""Single-octupole semisymmetrization and distance-to-manifold queries.

``semisymmetrize`` runs penalty-descent from an arbitrary octupole and
records the full trajectory; ``distance_to_manifold`` answers nearest-point
queries against the semisymmetric manifold by coarse Euler-angle
enumeration plus Levenberg--Marquardt refinement.  The square root of the
penalty tracks the true distance within a bounded ratio, which is what the
trajectory's ``distance`` column lets callers check.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from typing import List, NamedTuple

import numpy as np

from . import parallel, sh3
from .descent import DescentConfig, gradient_descent
from .semisymmetry import DEFAULT_WEIGHTS, PenaltyWeights, penalty, penalty_gradient

__all__ = [
    "TrajectoryPoint",
    "Trajectory",
    "ManifoldProjection",
    "semisymmetrize",
    "distance_to_manifold",
    "sqrt_penalty_vs_distance",
]

#: Inputs with norm below this are treated as degenerate (exact saddle at 0).
DEGENERATE_NORM = 1e-8
_PERTURBATION = 1e-3


class TrajectoryPoint(NamedTuple):
    iteration: int
    octupole: np.ndarray
    penalty: float
    sqrt_penalty: float
    distance: float


@dataclass
class Trajectory:
    """Accepted iterates of a semisymmetrization run, in order."""

    points: List[TrajectoryPoint]
    status: str  # "converged" | "max_iters" | "stalled"
    perturbed: bool = False  # degenerate input was nudged off the origin

    @property
    def final(self) -> TrajectoryPoint:
        return self.points[-1]

    @property
    def penalties(self) -> np.ndarray:
        return np.array([p.penalty for p in self.points])

    @property
    def sqrt_penalties(self) -> np.ndarray:
        return np.array([p.sqrt_penalty for p in self.points])

    @property
    def distances(self) -> np.ndarray:
        return np.array([p.distance for p in self.points])


class ManifoldProjection(NamedTuple):
    distance: float
    nearest: np.ndarray
    angles: sh3.EulerAngles


def semisymmetrize(
    a0,
    w: PenaltyWeights = DEFAULT_WEIGHTS,
    cfg: DescentConfig = DescentConfig(),
) -> Trajectory:
    """Descend the penalty from ``a0`` until sqrt(penalty) < cfg.tol.

    Penalty values along the trajectory are non-increasing (Armijo line
    search); near-zero inputs sit on an exact saddle and are first nudged
    to a small multiple of the reference octupole.
    """
    a0 = np.asarray(a0, dtype=np.float64)
    if a0.shape != (7,):
        raise ValueError(f"expected 7 coefficients, got shape {a0.shape}")
    if not np.all(np.isfinite(a0)):
        raise ValueError("octupole coefficients must be finite")

    perturbed = False
    if math.sqrt(float(a0 @ a0)) < DEGENERATE_NORM:
        a0 = _PERTURBATION * sh3.REFERENCE
        perturbed = True

    recorded = []

    def record(iteration, x, f):
        recorded.append((iteration, x.copy(), f))

    result = gradient_descent(
        a0,
        objective=lambda x: penalty(x, w),
        gradient=lambda x: penalty_gradient(x, w),
        cfg=cfg,
        converged=lambda x, f, g: math.sqrt(max(f, 0.0)) < cfg.tol,
        on_iterate=record,
    )

    dists = parallel.map_indexed(
        lambda item: distance_to_manifold(item[1]).distance, recorded
    )
    points = [
        TrajectoryPoint(it, x, f, math.sqrt(max(f, 0.0)), dist)
        for (it, x, f), dist in zip(recorded, dists)
    ]
    return Trajectory(points, result.status, perturbed)


def sqrt_penalty_vs_distance(trajectory: Trajectory) -> List[float]:
    """Per-iterate ratio sqrt(penalty) / distance; near-zero distances
    (< 1e-12) are skipped to avoid dividing by noise."""
    return [
        p.sqrt_penalty / p.distance
        for p in trajectory.points
        if p.distance >= 1e-12
    ]


# ---------------------------------------------------------------------------
# Distance to the manifold: coarse enumeration + Levenberg-Marquardt.
# ---------------------------------------------------------------------------


@functools.lru_cache(maxsize=4)
def _manifold_grid(grid_n: int):
    """Cached (angles (N,3), points (N,7)) over a grid_n^3 Euler-angle grid.

    Full [0, 2pi)^3 coverage over-samples the rotation group, which is
    harmless for an argmin and keeps the indexing trivial.
    """
    ticks = 2.0 * math.pi * np.arange(grid_n) / grid_n
    rz = sh3._rotation_z_stack(ticks) @ sh3.REFERENCE  # (n,7)
    ry = np.einsum("bij,gj->bgi", sh3._rotation_y_stack(ticks), rz)
    pts = np.einsum("aij,bgj->abgi", sh3._rotation_x_stack(ticks), ry)
    angles = np.stack(
        np.meshgrid(ticks, ticks, ticks, indexing="ij"), axis=-1
    ).reshape(-1, 3)
    pts = pts.reshape(-1, 7)
    angles.setflags(write=False)
    pts.setflags(write=False)
    return angles, pts


def _point_and_jacobian(theta: np.ndarray):
    """Manifold point s(theta) and its 7x3 Jacobian."""
    alpha, beta, gamma = theta
    rz = sh3.rotation_z(gamma)
    ry = sh3.rotation_y(beta)
    rx = sh3.rotation_x(alpha)
    v_g = rz @ sh3.REFERENCE
    v_bg = ry @ v_g
    s = rx @ v_bg

    ryq = sh3._ROTATION_Y_QUARTER
    rxq = sh3.ROTATION_X_QUARTER
    d_rx = ryq.T @ sh3._rotation_z_derivative(alpha) @ ryq
    d_ry = rxq @ sh3._rotation_z_derivative(beta) @ rxq.T
    d_rz = sh3._rotation_z_derivative(gamma)

    jac = np.empty((7, 3))
    jac[:, 0] = d_rx @ v_bg
    jac[:, 1] = rx @ (d_ry @ v_g)
    jac[:, 2] = rx @ (ry @ (d_rz @ sh3.REFERENCE))
    return s, jac


def distance_to_manifold(
    a, grid_n: int = 24, refine_iters: int = 50
) -> ManifoldProjection:
    """Euclidean distance from ``a`` to the nearest semisymmetric octupole.

    A grid_n^3 angle grid proposes the starting cell (first minimum wins on
    ties); damped Gauss-Newton then polishes it.  Only improving steps are
    accepted, so the result is never worse than the grid answer.
    """
    if grid_n < 8:
        raise ValueError(f"grid_n must be >= 8, got {grid_n}")
    a = np.asarray(a, dtype=np.float64)
    angles, pts = _manifold_grid(grid_n)
    diff = pts - a
    idx = int(np.argmin(np.einsum("ni,ni->n", diff, diff)))

    theta = angles[idx].copy()
    s, jac = _point_and_jacobian(theta)
    residual = s - a
    cost = float(residual @ residual)
    lam = 1e-3
    for _ in range(refine_iters):
        g = jac.T @ residual
        h = jac.T @ jac
        step = np.linalg.solve(h + lam * np.eye(3), -g)
        trial = theta + step
        s_t, jac_t = _point_and_jacobian(trial)
        r_t = s_t - a
        cost_t = float(r_t @ r_t)
        if cost_t < cost:
            theta, s, jac, residual, cost = trial, s_t, jac_t, r_t, cost_t
            lam = max(lam / 3.0, 1e-12)
            if float(step @ step) < 1e-28:
                break
        else:
            lam *= 10.0
            if lam > 1e12:
                break

    return ManifoldProjection(
        math.sqrt(cost), s, sh3.EulerAngles(*(float(t) for t in theta))
    )

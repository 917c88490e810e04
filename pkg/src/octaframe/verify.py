"""Self-check suite: every library-level identity this package relies on,
runnable from the CLI.

Given the same seed and sample count the report text is byte-identical
across runs and thread counts (all checks are seeded, all reductions have
fixed order).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List

import numpy as np

from . import sampling, semisymmetry, sh3
from .backend import backend_name
from .field import smoothness_term

_E_M3 = np.array([1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0])


@dataclass
class CheckResult:
    name: str
    passed: bool
    worst: float
    tol: float


def _fd_gradient(fn, a: np.ndarray, h: float = 1e-5) -> np.ndarray:
    g = np.empty(7)
    for i in range(7):
        step = np.zeros(7)
        step[i] = h
        g[i] = (fn(a + step) - fn(a - step)) / (2.0 * h)
    return g


def _relative_error(analytic: np.ndarray, reference: np.ndarray) -> float:
    scale = max(float(np.linalg.norm(reference)), 1e-12)
    return float(np.linalg.norm(analytic - reference)) / scale


def run_checks(samples: int = 100, seed: int = 1) -> List[CheckResult]:
    if samples < 1:
        raise ValueError(f"samples must be >= 1, got {samples}")
    rng = sampling.make_rng(seed)
    results: List[CheckResult] = []

    def check(name, worst, tol):
        results.append(CheckResult(name, worst <= tol, float(worst), tol))

    # -- rotation representation -------------------------------------------
    rxq = sh3.ROTATION_X_QUARTER
    check(
        "quarter-turn fourth power is identity",
        np.abs(np.linalg.matrix_power(rxq, 4) - np.eye(7)).max(),
        1e-14,
    )

    worst = 0.0
    for _ in range(min(samples, 100)):
        r = sh3.compose_zxz(*sampling.random_angles(rng))
        worst = max(worst, sh3.orthogonality_residual(r))
        r = sh3.compose_xyz(*sampling.random_angles(rng))
        worst = max(worst, sh3.orthogonality_residual(r))
    check("harmonic rotations orthogonal", worst, 1e-13)

    worst = 0.0
    for _ in range(min(samples, 100)):
        angles = sampling.random_angles(rng)
        r7 = sh3.compose_zxz(*angles)
        q = sh3.so3_compose_zxz(*angles)
        a = sampling.random_unit_octupole(rng)
        v = sampling.standard_normals(rng, 3)
        v /= np.linalg.norm(v)
        rotated_coeffs = sh3.evaluate(r7 @ a, v)
        precomposed = sh3.evaluate(a, q.T @ v)
        worst = max(worst, abs(rotated_coeffs - precomposed))
    check("coefficient rotation matches function rotation", worst, 1e-10)

    # -- manifold (quadric zero set) ----------------------------------------
    worst_norm = 0.0
    worst_quadric = 0.0
    for _ in range(samples):
        a = sh3.semisymmetric_from_angles(*sampling.random_angles(rng))
        r = semisymmetry.quadric_residuals(a)
        worst_norm = max(worst_norm, abs(r[0]))
        worst_quadric = max(worst_quadric, float(np.abs(r[1:]).max()))
    check("manifold points have unit norm", worst_norm, 1e-12)
    check("manifold points satisfy the quadrics", worst_quadric, 1e-10)

    # -- deviation spot values ----------------------------------------------
    spot = max(
        abs(semisymmetry.deviation(sh3.REFERENCE)),
        abs(semisymmetry.deviation(_E_M3) - 25.0),
        abs(semisymmetry.quadric_residuals(_E_M3)[1] + 5.0),
        abs(smoothness_term(sh3.REFERENCE, _E_M3) - 4.0),
    )
    check("deviation and smoothness spot values", spot, 1e-12)

    # -- rotation invariance of the deviation --------------------------------
    worst = 0.0
    for _ in range(samples):
        a = 2.0 * sampling.random_unit_octupole(rng) * rng.random()
        d = semisymmetry.deviation(a)
        r = sh3.compose_zxz(*sampling.random_angles(rng))
        err = abs(semisymmetry.deviation(r @ a) - d) / max(1.0, d)
        worst = max(worst, err)
    check("deviation is rotation invariant", worst, 1e-9)

    # -- orbit average of the trial measure ----------------------------------
    worst = 0.0
    for _ in range(samples):
        a = sampling.random_unit_octupole(rng)
        avg = semisymmetry.so3_average_trial(a)
        worst = max(worst, abs(avg - semisymmetry.deviation(a)))
    check("orbit-averaged trial measure equals deviation", worst, 1e-6)

    # -- analytic gradients vs central differences ---------------------------
    worst_dev = 0.0
    worst_pen = 0.0
    w = semisymmetry.DEFAULT_WEIGHTS
    for _ in range(min(samples, 50)):
        a = sampling.random_unit_octupole(rng)
        fd = _fd_gradient(semisymmetry.deviation, a)
        worst_dev = max(
            worst_dev, _relative_error(semisymmetry.deviation_gradient(a), fd)
        )
        fd = _fd_gradient(lambda x: semisymmetry.penalty(x, w), a)
        worst_pen = max(
            worst_pen, _relative_error(semisymmetry.penalty_gradient(a, w), fd)
        )
    check("deviation gradient matches finite differences", worst_dev, 1e-6)
    check("penalty gradient matches finite differences", worst_pen, 1e-6)

    return results


def report_text(results: List[CheckResult], samples: int, seed: int) -> str:
    lines = [
        f"octaframe verify: samples={samples} seed={seed} backend={backend_name()}"
    ]
    width = max(len(r.name) for r in results)
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        lines.append(
            f"{status}  {r.name.ljust(width)}  worst {r.worst:.3e}  tol {r.tol:.0e}"
        )
    n_pass = sum(r.passed for r in results)
    lines.append(f"{n_pass}/{len(results)} checks passed")
    return "\n".join(lines) + "\n"

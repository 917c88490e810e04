"""Gradient descent with Armijo backtracking, shared by projection and field
optimization.

The line search only ever accepts strictly sufficient decrease, which is
what makes the "objective history is monotone non-increasing" guarantee of
the callers testable rather than aspirational.  The accepted step size is
carried over (divided by the backtracking factor) to the next iteration,
so the search adapts in both directions.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

STATUS_CONVERGED = "converged"
STATUS_MAX_ITERS = "max_iters"
STATUS_STALLED = "stalled"

# A backtracked step below this is numerically meaningless: report a stall.
_MIN_STEP = 1e-18


@dataclass(frozen=True)
class DescentConfig:
    """Parameters of the backtracking descent.

    ``tol`` is the caller's convergence threshold: square-root penalty for
    single-octupole runs, gradient max-norm for field runs.
    """

    step: float = 0.1
    max_iters: int = 500
    tol: float = 1e-6
    backtrack: float = 0.5
    armijo: float = 1e-4

    def __post_init__(self):
        if self.step <= 0.0:
            raise ValueError(f"step must be positive, got {self.step}")
        if self.max_iters < 1:
            raise ValueError(f"max_iters must be >= 1, got {self.max_iters}")
        if self.tol <= 0.0:
            raise ValueError(f"tol must be positive, got {self.tol}")
        if not 0.0 < self.backtrack < 1.0:
            raise ValueError(f"backtrack must be in (0,1), got {self.backtrack}")
        if not 0.0 < self.armijo < 1.0:
            raise ValueError(f"armijo must be in (0,1), got {self.armijo}")


@dataclass
class DescentResult:
    x: np.ndarray
    objective: float
    history: list  # objective value per accepted iterate, index 0 = start
    status: str
    iterations: int


def gradient_descent(
    x0: np.ndarray,
    objective: Callable[[np.ndarray], float],
    gradient: Callable[[np.ndarray], np.ndarray],
    cfg: DescentConfig,
    converged: Callable[[np.ndarray, float, np.ndarray], bool],
    on_iterate: Optional[Callable[[int, np.ndarray, float], None]] = None,
) -> DescentResult:
    """Minimize ``objective`` from ``x0``; ``converged(x, f, g)`` decides
    when to stop early.  ``on_iterate`` sees every accepted iterate
    (including iterate 0) and may record it."""
    x = np.array(x0, dtype=np.float64, copy=True)
    f = objective(x)
    history = [f]
    if on_iterate is not None:
        on_iterate(0, x, f)

    t = cfg.step
    status = STATUS_MAX_ITERS
    it = 0
    for it in range(1, cfg.max_iters + 1):
        g = gradient(x)
        if converged(x, f, g):
            status = STATUS_CONVERGED
            it -= 1
            break
        gg = float(np.vdot(g, g))
        if gg == 0.0:
            # exactly stationary but not converged by the caller's test
            status = STATUS_STALLED
            it -= 1
            break

        while True:
            x_new = x - t * g
            f_new = objective(x_new)
            # strict decrease required: at the float noise floor the Armijo
            # bound rounds to f itself, and accepting equality would loop
            # forever without progress
            if f_new <= f - cfg.armijo * t * gg and f_new < f:
                break
            t *= cfg.backtrack
            if t < _MIN_STEP:
                return DescentResult(x, f, history, STATUS_STALLED, it - 1)

        x, f = x_new, f_new
        history.append(f)
        if on_iterate is not None:
            on_iterate(it, x, f)
        if converged(x, f, None):
            status = STATUS_CONVERGED
            break
        t /= cfg.backtrack
    return DescentResult(x, f, history, status, it)

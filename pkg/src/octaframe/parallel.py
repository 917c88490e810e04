"""Optional thread parallelism, capped by the OCTAFRAME_THREADS env var.

Parallelism is only applied to order-preserving per-item maps whose items
are independent, so every result is bit-identical no matter how many
worker threads run (scheduling can never change what any item computes).
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor

_ENV_VAR = "OCTAFRAME_THREADS"


def thread_count() -> int:
    """Worker-thread cap from the environment; defaults to 1 (serial)."""
    raw = os.environ.get(_ENV_VAR)
    if raw is None or raw == "":
        return 1
    try:
        n = int(raw)
    except ValueError:
        raise ValueError(f"{_ENV_VAR} must be a positive integer, got {raw!r}")
    if n < 1:
        raise ValueError(f"{_ENV_VAR} must be >= 1, got {n}")
    return n


def map_indexed(fn, items) -> list:
    """``[fn(x) for x in items]``, possibly computed by a thread pool.

    Results come back in input order regardless of scheduling.
    """
    items = list(items)
    workers = min(thread_count(), len(items))
    if workers <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))

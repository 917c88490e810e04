"""Timing comparison between the compiled kernels and the pure-python
fallback.

Run from the repository root:

    python3 benchmarks/bench_kernels.py [--nodes 4096] [--repeats 5]
"""

import argparse
import time

import numpy as np

from octaframe import _kernels_py

try:
    from octaframe import _kernels as _kernels_c
except ImportError:
    _kernels_c = None


def build_field(n_nodes, seed=0):
    rng = np.random.default_rng(seed)
    values = rng.normal(size=(n_nodes, 7))
    edges = np.array(
        [[i, i + 1] for i in range(n_nodes - 1)] + [[0, n_nodes - 1]],
        dtype=np.int64,
    )
    pinned = np.zeros(n_nodes, dtype=bool)
    pinned[:: max(n_nodes // 16, 1)] = True
    return values, edges, pinned


def best_of(fn, repeats):
    times = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--nodes", type=int, default=4096)
    parser.add_argument("--repeats", type=int, default=5)
    args = parser.parse_args()

    values, edges, pinned = build_field(args.nodes)
    w1, w2 = 5.0, 2.5

    cases = [
        ("deviation_batch", lambda k: k.deviation_batch(values)),
        ("deviation_gradient_batch", lambda k: k.deviation_gradient_batch(values)),
        ("penalty_batch", lambda k: k.penalty_batch(values, w1, w2)),
        ("penalty_gradient_batch", lambda k: k.penalty_gradient_batch(values, w1, w2)),
        ("field_energy", lambda k: k.field_energy(values, edges, w1, w2)),
        ("field_gradient", lambda k: k.field_gradient(values, edges, pinned, w1, w2)),
    ]

    backends = [("python", _kernels_py)]
    if _kernels_c is not None:
        backends.append(("cython", _kernels_c))
    else:
        print("compiled extension not built; timing the fallback only\n")

    print(f"{args.nodes} nodes, best of {args.repeats} runs\n")
    header = f"{'kernel':<26}" + "".join(f"{name:>12}" for name, _ in backends)
    if len(backends) == 2:
        header += f"{'speedup':>10}"
    print(header)
    print("-" * len(header))

    for case_name, call in cases:
        row = f"{case_name:<26}"
        timings = []
        for _, module in backends:
            t = best_of(lambda: call(module), args.repeats)
            timings.append(t)
            row += f"{t * 1e3:>10.2f}ms"
        if len(timings) == 2:
            row += f"{timings[0] / timings[1]:>9.1f}x"
        print(row)


if __name__ == "__main__":
    main()

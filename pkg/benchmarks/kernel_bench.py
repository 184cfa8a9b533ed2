"""Benchmark the numba and numpy kernel backends against each other.

Runs this module once per backend (selected through the
EDGEBALANCE_KERNELS environment variable) in subprocesses and prints a
comparison table for the Laplacian matvec, the block matvec, the
quadratic form, and edge scoring.

Usage: python benchmarks/kernel_bench.py [--n 20000] [--m 120000]
"""

from __future__ import annotations

import argparse
import json
import os
import subprocess
import sys
import time


def _measure(n: int, m: int, repeats: int) -> dict[str, float]:
    import numpy as np

    from edgebalance import _kernels

    rng = np.random.default_rng(42)
    eu = rng.integers(0, n - 1, m)
    ev = (eu + rng.integers(1, n - eu)).astype(np.int64)
    es = rng.choice([-1.0, 1.0], m)
    deg = np.zeros(n)
    np.add.at(deg, eu, 1.0)
    np.add.at(deg, ev, 1.0)
    x = rng.standard_normal(n)
    block = rng.standard_normal((n, 4))
    out = np.empty_like(x)
    out_block = np.empty_like(block)
    scores = np.empty(m)

    # warm up (first numba call compiles)
    _kernels.laplacian_matvec(eu, ev, es, deg, x, out)
    _kernels.laplacian_matmat(eu, ev, es, deg, block, out_block)
    _kernels.quadratic_form(eu, ev, es, x)
    _kernels.edge_scores(eu, ev, es, x, scores)

    def clock(fn) -> float:
        best = float("inf")
        for _ in range(repeats):
            t0 = time.perf_counter()
            fn()
            best = min(best, time.perf_counter() - t0)
        return best

    return {
        "backend": _kernels.BACKEND,
        "matvec": clock(lambda: _kernels.laplacian_matvec(eu, ev, es, deg, x, out)),
        "matmat": clock(
            lambda: _kernels.laplacian_matmat(eu, ev, es, deg, block, out_block)
        ),
        "quadratic_form": clock(lambda: _kernels.quadratic_form(eu, ev, es, x)),
        "edge_scores": clock(lambda: _kernels.edge_scores(eu, ev, es, x, scores)),
    }


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--n", type=int, default=20_000, help="node count")
    parser.add_argument("--m", type=int, default=120_000, help="edge count")
    parser.add_argument("--repeats", type=int, default=20)
    parser.add_argument("--worker", action="store_true", help=argparse.SUPPRESS)
    args = parser.parse_args()

    if args.worker:
        print(json.dumps(_measure(args.n, args.m, args.repeats)))
        return

    rows = []
    for backend in ("numba", "numpy"):
        env = dict(os.environ, EDGEBALANCE_KERNELS=backend)
        proc = subprocess.run(
            [sys.executable, __file__, "--worker", "--n", str(args.n),
             "--m", str(args.m), "--repeats", str(args.repeats)],
            env=env,
            capture_output=True,
            text=True,
            check=True,
        )
        rows.append(json.loads(proc.stdout.strip().splitlines()[-1]))

    kernels = ["matvec", "matmat", "quadratic_form", "edge_scores"]
    print(f"n={args.n} m={args.m} (best of {args.repeats})")
    print(f"{'kernel':16s} {'numba':>12s} {'numpy':>12s} {'speedup':>9s}")
    numba_row = next(r for r in rows if r["backend"] == "numba")
    numpy_row = next(r for r in rows if r["backend"] == "numpy")
    for k in kernels:
        ratio = numpy_row[k] / numba_row[k] if numba_row[k] > 0 else float("inf")
        print(
            f"{k:16s} {numba_row[k] * 1e3:10.3f}ms {numpy_row[k] * 1e3:10.3f}ms "
            f"{ratio:8.1f}x"
        )


if __name__ == "__main__":
    main()

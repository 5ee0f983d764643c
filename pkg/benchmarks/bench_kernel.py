"""Benchmark the compiled integrator kernel against the pure-Python fallback.

Run from the repository root:

    python3 benchmarks/bench_kernel.py

Each workload runs on both backends (best of `REPEATS` timings) and the table
reports the speedup. Results are also sanity-checked for exact agreement,
mirroring the parity test suite.
"""

import math
import time

import lienard._kernel as kernel
from lienard import LienardSystem, find_cycles, poly_fn, return_map

REPEATS = 3

VDP = LienardSystem.from_F(
    poly_fn(0.0, -1.0, 0.0, 1.0 / 3.0), poly_fn(0.0, 1.0)
)
STIFF = LienardSystem.from_F(
    poly_fn(0.0, -5.0, 0.0, 5.0 / 3.0), poly_fn(0.0, 1.0)
)

WORKLOADS = {
    "return_map tight tol": lambda: return_map(VDP, 2.5, rtol=1e-12, atol=1e-12),
    "return_map default": lambda: return_map(VDP, 2.5),
    "return_map stiff": lambda: return_map(STIFF, 4.0),
    "find_cycles grid 16": lambda: find_cycles(VDP, 0.5, 4.0, 16),
}


def best_time(fn):
    best = math.inf
    result = None
    for _ in range(REPEATS):
        start = time.perf_counter()
        result = fn()
        best = min(best, time.perf_counter() - start)
    return best, result


def describe(result):
    if result is None:
        return "no return"
    if isinstance(result, list):
        return f"{len(result)} cycle(s)"
    return f"x_out={result.x_out:.12g}"


def main():
    try:
        kernel.use_backend("compiled")
    except ImportError:
        print("compiled kernel not built; run `pip install -e .` first")
        return 1
    print(f"{'workload':<24} {'python':>10} {'compiled':>10} {'speedup':>8}   result")
    print("-" * 72)
    for name, fn in WORKLOADS.items():
        kernel.use_backend("python")
        t_py, r_py = best_time(fn)
        kernel.use_backend("compiled")
        t_cy, r_cy = best_time(fn)
        if describe(r_py) != describe(r_cy):
            raise SystemExit(
                f"backend mismatch on {name!r}: {describe(r_py)} vs {describe(r_cy)}"
            )
        print(
            f"{name:<24} {t_py * 1e3:>8.2f}ms {t_cy * 1e3:>8.2f}ms "
            f"{t_py / t_cy:>7.1f}x   {describe(r_cy)}"
        )
    return 0


if __name__ == "__main__":
    raise SystemExit(main())

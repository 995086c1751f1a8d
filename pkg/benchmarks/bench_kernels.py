#!/usr/bin/env python3
"""Benchmark: compiled logneg kernels vs the pure-Python twin.

Times the three workloads that dominate the optimizer: scalar fused E_N
calls (simplex refinement), the 40x40 strength grid (coarse scan), and a
full max_logneg sweep point.  Run after `pip install -e .`:

    python benchmarks/bench_kernels.py
"""

import time

import numpy as np

from mirrorent import _kernels_py

try:
    from mirrorent import _kernels
except ImportError:
    _kernels = None

from mirrorent import optimize


def timeit(fn, *args, repeat=5, inner=1):
    best = np.inf
    for _ in range(repeat):
        t0 = time.perf_counter()
        for _ in range(inner):
            fn(*args)
        best = min(best, (time.perf_counter() - t0) / inner)
    return best


def bench_scalar(mod, n=20000):
    rng = np.random.default_rng(1)
    was = np.exp(rng.uniform(-2, 2, size=(n, 2)))

    def run():
        acc = 0.0
        for wc, wd in was:
            acc += mod.logneg_closed(wc, wd, 1.0, 5.522, 0.0, 0.0, 0.0, 0.0)
        return acc

    return timeit(run) / n


def bench_grid(mod, n=40, repeat=20):
    g = np.geomspace(1e-2, 1e2, n) * np.sqrt(5.522)
    return timeit(mod.logneg_grid, g, g, 1.0, 5.522, 0.0, 0.0, 0.0, 0.0,
                  repeat=repeat)


def bench_max_logneg():
    return timeit(optimize.max_logneg, 5.522, 0.0, repeat=3)


def main():
    mods = [("python", _kernels_py)]
    if _kernels is not None:
        mods.append(("compiled", _kernels))
    else:
        print("compiled kernels unavailable; benchmarking the fallback only")

    rows = []
    for name, mod in mods:
        rows.append((
            name,
            bench_scalar(mod) * 1e6,
            bench_grid(mod) * 1e3,
        ))
    print(f"{'backend':<10} {'scalar E_N [us]':>16} {'40x40 grid [ms]':>16}")
    for name, sc, gr in rows:
        print(f"{name:<10} {sc:>16.3f} {gr:>16.3f}")
    if len(rows) == 2:
        print(f"{'speedup':<10} {rows[0][1] / rows[1][1]:>15.1f}x "
              f"{rows[0][2] / rows[1][2]:>15.1f}x")

    from mirrorent import BACKEND
    print(f"\nmax_logneg(ratio=5.522) with active backend [{BACKEND}]: "
          f"{bench_max_logneg() * 1e3:.1f} ms")


if __name__ == "__main__":
    main()

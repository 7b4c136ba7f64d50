"""Benchmark: compiled vs pure-numpy Green-entry kernel.

The compiled kernel evaluates the three-regime branch in one pass per
element; the numpy fallback needs three masked passes plus temporaries.
Small arrays (the radial quadrature feeds 15-point batches) are dominated
by numpy call overhead, which is where the extension pays off most.

Run:  python3 benchmarks/bench_kernels.py
"""

import time

import numpy as np

from eulerdamp import kernels
from eulerdamp.kernels import pure_backend

SIZES = (15, 240, 4_096, 65_536, 64**3)
REPEATS = (2000, 500, 100, 20, 8)


def timed(impl, xi, t, a, kappa2, repeats):
    best = np.inf
    for _ in range(5):
        start = time.perf_counter()
        for _ in range(repeats):
            kernels.green_entries(xi, t, a, kappa2, impl=impl)
        best = min(best, (time.perf_counter() - start) / repeats)
    return best


def main():
    rng = np.random.default_rng(0)
    a, kappa2, t = 1.0, 1.2909944487358056, 0.8
    compiled = None if kernels.BACKEND != "cython" else kernels._impl

    print(f"active backend: {kernels.BACKEND}")
    header = f"{'n':>9}  {'pure numpy':>12}  {'compiled':>12}  {'speedup':>8}"
    print(header)
    print("-" * len(header))
    for n, reps in zip(SIZES, REPEATS):
        # spread across all three regimes, including the critical band
        xi = np.concatenate([
            rng.uniform(0.0, 0.37, n // 3),
            0.3873 + rng.uniform(-1e-8, 1e-8, n // 3),
            rng.uniform(0.4, 6.0, n - 2 * (n // 3)),
        ])
        t_pure = timed(pure_backend, xi, t, a, kappa2, reps)
        if compiled is None:
            print(f"{n:>9}  {t_pure * 1e6:>10.1f}us  {'n/a':>12}  {'n/a':>8}")
            continue
        t_comp = timed(compiled, xi, t, a, kappa2, reps)
        print(f"{n:>9}  {t_pure * 1e6:>10.1f}us  {t_comp * 1e6:>10.1f}us  "
              f"{t_pure / t_comp:>7.1f}x")

    if compiled is not None:
        xi = rng.uniform(0.0, 6.0, 4096)
        fast = kernels.green_entries(xi, t, a, kappa2, impl=compiled)
        slow = kernels.green_entries(xi, t, a, kappa2, impl=pure_backend)
        drift = max(float(np.max(np.abs(f - s))) for f, s in zip(fast, slow))
        print(f"\nmax backend drift on shared input: {drift:.3e}")


if __name__ == "__main__":
    main()

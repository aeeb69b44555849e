"""Benchmark the compiled Gini split kernel against the pure-Python/NumPy
fallback (the path selected by DDIKIT_NO_NUMBA).

Usage: python benchmarks/bench_kernels.py [rows] [features]
"""

import sys
import time

import numpy as np

from ddikit.prediction.kernels import USING_NUMBA, best_split, best_split_nopython


def bench(fn, X, y, feats, repeats=20):
    fn(X, y, feats)  # warm-up (and JIT compilation for the numba path)
    start = time.perf_counter()
    for _ in range(repeats):
        fn(X, y, feats)
    return (time.perf_counter() - start) / repeats


def main():
    rows = int(sys.argv[1]) if len(sys.argv) > 1 else 5000
    features = int(sys.argv[2]) if len(sys.argv) > 2 else 105
    rng = np.random.default_rng(0)
    X = rng.integers(0, 6, size=(rows, features)).astype(np.int64)
    y = rng.integers(0, 2, size=rows).astype(np.int64)
    feats = np.arange(features, dtype=np.int64)

    assert best_split(X, y, feats) == best_split_nopython(X, y, feats)

    t_fallback = bench(best_split_nopython, X, y, feats, repeats=3)
    print(f"rows={rows} features={features}")
    print(f"fallback (pure python/numpy):  {t_fallback * 1000:10.2f} ms/call")
    if USING_NUMBA:
        t_numba = bench(best_split, X, y, feats)
        print(f"numba @njit:                   {t_numba * 1000:10.2f} ms/call")
        print(f"speedup:                       {t_fallback / t_numba:10.1f}x")
    else:
        print("numba disabled (DDIKIT_NO_NUMBA set or numba missing); "
              "only the fallback was timed")


if __name__ == "__main__":
    main()

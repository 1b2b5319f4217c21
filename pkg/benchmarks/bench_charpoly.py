"""Time the modular characteristic-polynomial kernel: numba against numpy.

Usage: python3 benchmarks/bench_charpoly.py [--sizes 20 60 120] [--repeat 5]
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from birdeg.exactmath import RatMatrix, charpoly
from birdeg.exactmath._kernels import HAVE_NUMBA, charpoly_mod

PRIME = 2_147_483_629


def _best(fn, repeat: int) -> float:
    best = float("inf")
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t)
    return best


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[20, 60, 120])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    rng = np.random.default_rng(0)
    if HAVE_NUMBA:
        charpoly_mod(np.eye(2, dtype=np.int64), PRIME, "numba")  # compile once
    print(f"{'n':>5} {'numpy [s]':>12} {'numba [s]':>12} {'exact charpoly [s]':>20}")
    for n in args.sizes:
        a = rng.integers(-9, 10, size=(n, n)).astype(np.int64) % PRIME
        t_np = _best(lambda: charpoly_mod(a, PRIME, "numpy"), args.repeat)
        t_nb = _best(lambda: charpoly_mod(a, PRIME, "numba"), args.repeat) if HAVE_NUMBA else float("nan")
        m = RatMatrix.from_rows(rng.integers(-9, 10, size=(n, n)).tolist())
        t_exact = _best(lambda: charpoly(m), 1)
        print(f"{n:>5} {t_np:>12.4f} {t_nb:>12.4f} {t_exact:>20.4f}")


if __name__ == "__main__":
    main()

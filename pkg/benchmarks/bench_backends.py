#!/usr/bin/env python3
"""Time the jit-compiled kernels against the pure-numpy twins.

Both backends share one algorithm, op for op, so this is a pure dispatch
comparison: how much the compiled loops buy over vectorized numpy on the two
hot kernels (closed-form tables and three-term recurrences), and a check
that the twins agree to near machine precision on the benchmarked inputs.

Run from the repository root:

    python3 benchmarks/bench_backends.py
    python3 benchmarks/bench_backends.py --grid 200000 --k 256 --repeats 5
"""

import argparse
import sys
import time

import numpy as np

from quadmom.backend import (
    CHEBYSHEV,
    HAVE_NUMBA,
    NESTEROV,
    POWER,
    SOR,
    closed_table,
    recurrence_table,
)
from quadmom.params import accel_params
from quadmom.polynomials import METHODS, Method, recurrence_coefficients

KERNEL_ID = {
    Method.POWER: POWER,
    Method.CHEBYSHEV: CHEBYSHEV,
    Method.SOR: SOR,
    Method.NESTEROV: NESTEROV,
}


def best_of(repeats, fn):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--rho", type=float, default=0.8)
    ap.add_argument("--grid", type=int, default=50_000, help="mu points on [0, 1]")
    ap.add_argument("--k", type=int, default=128, help="degrees 1..K for closed tables")
    ap.add_argument("--kmax", type=int, default=512, help="recurrence horizon")
    ap.add_argument("--repeats", type=int, default=3, help="take the best of N runs")
    args = ap.parse_args(argv)

    if not HAVE_NUMBA:
        print("compiled backend unavailable (numba missing or disabled); nothing to compare")
        return 1

    params = accel_params(args.rho)
    mus = np.linspace(0.0, 1.0, args.grid)
    ks = np.arange(1, args.k + 1, dtype=np.int64)

    # first calls compile; keep that out of the timings
    for method in METHODS:
        closed_table(mus[:8], ks[:4], params.rho, KERNEL_ID[method], use_numba=True)
        coef = recurrence_coefficients(method, params, 4)
        recurrence_table(mus[:8], coef, 4, KERNEL_ID[method], use_numba=True)

    header = f"{'kernel':<34} {'numpy':>10} {'numba':>10} {'speedup':>9} {'agree':>10}"
    print(header)
    print("-" * len(header))
    for method in METHODS:
        mid = KERNEL_ID[method]
        label = f"closed_table[{method.value}] ({args.grid}x{args.k})"
        t_np = best_of(args.repeats, lambda: closed_table(mus, ks, params.rho, mid, use_numba=False))
        t_nb = best_of(args.repeats, lambda: closed_table(mus, ks, params.rho, mid, use_numba=True))
        a = closed_table(mus, ks, params.rho, mid, use_numba=False)
        b = closed_table(mus, ks, params.rho, mid, use_numba=True)
        agree = float(np.max(np.abs(a - b)))
        print(f"{label:<34} {t_np*1e3:>8.1f}ms {t_nb*1e3:>8.1f}ms {t_np/t_nb:>8.1f}x {agree:>10.1e}")

    for method in METHODS:
        mid = KERNEL_ID[method]
        coef = recurrence_coefficients(method, params, args.kmax)
        label = f"recurrence[{method.value}] ({args.grid}x{args.kmax})"
        t_np = best_of(args.repeats, lambda: recurrence_table(mus, coef, args.kmax, mid, use_numba=False))
        t_nb = best_of(args.repeats, lambda: recurrence_table(mus, coef, args.kmax, mid, use_numba=True))
        a = recurrence_table(mus, coef, args.kmax, mid, use_numba=False)
        b = recurrence_table(mus, coef, args.kmax, mid, use_numba=True)
        agree = float(np.max(np.abs(a - b)))
        print(f"{label:<34} {t_np*1e3:>8.1f}ms {t_nb*1e3:>8.1f}ms {t_np/t_nb:>8.1f}x {agree:>10.1e}")

    # the rate-certificate workload: few mu points, very long horizons, where
    # the per-step numpy dispatch overhead dominates and the compiled loop wins
    narrow = np.linspace(0.0, 1.0, 64)
    long_k = 50_000
    for method in METHODS:
        mid = KERNEL_ID[method]
        coef = recurrence_coefficients(method, params, long_k)
        label = f"recurrence[{method.value}] (64x{long_k})"
        t_np = best_of(args.repeats, lambda: recurrence_table(narrow, coef, long_k, mid, use_numba=False))
        t_nb = best_of(args.repeats, lambda: recurrence_table(narrow, coef, long_k, mid, use_numba=True))
        a = recurrence_table(narrow, coef, long_k, mid, use_numba=False)
        b = recurrence_table(narrow, coef, long_k, mid, use_numba=True)
        agree = float(np.max(np.abs(a - b)))
        print(f"{label:<34} {t_np*1e3:>8.1f}ms {t_nb*1e3:>8.1f}ms {t_np/t_nb:>8.1f}x {agree:>10.1e}")

    return 0


if __name__ == "__main__":
    sys.exit(main())

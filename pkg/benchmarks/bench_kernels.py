#!/usr/bin/env python3
"""Compare the compiled kernels against the pure-Python fallback.

Run from the repository root:

    python3 benchmarks/bench_kernels.py [--repeat N]

Each kernel is timed on a representative workload in every available
backend; the table reports best-of-N wall times and the speedup of the
compiled extension over the fallback.
"""

import argparse
import time

import numpy as np

from densitylab import kernels

WORKLOADS = [
    ("sieve_primes", lambda mod: mod.sieve_primes(2 * 10**6)),
    ("least_prime_factor", lambda mod: mod.least_prime_factor(10**6)),
    ("bigomega_sieve", lambda mod: mod.bigomega_sieve(3 * 10**5)),
    ("quadform_residues_mod", lambda mod: mod.quadform_residues_mod(1, 0, 1, 3 * 10**3)),
    ("quadform_prime_square_count", lambda mod: mod.quadform_prime_square_count(1, 0, 1, 997)),
    ("poly_residues_mod", lambda mod: mod.poly_residues_mod((1, 2, 0, 3), 2 * 10**5)),
    ("window_max_count", lambda mod: mod.window_max_count(
        np.sort(np.random.default_rng(0).choice(10**7, 2 * 10**5, replace=False)).astype(np.int64),
        10**4,
    )),
    ("mult_table_count", lambda mod: mod.mult_table_count(10**6, 3)),
    ("sum_two_squares_indicator", lambda mod: mod.sum_two_squares_indicator(10**6)),
]


def best_of(fn, mod, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(mod)
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeat", type=int, default=3, help="timing repetitions")
    args = parser.parse_args()

    backends = kernels.available_backends()
    print(f"backends: {', '.join(backends)} (active: {kernels.BACKEND})\n")
    header = f"{'kernel':<30}" + "".join(f"{name:>12}" for name in backends)
    if len(backends) > 1:
        header += f"{'speedup':>10}"
    print(header)
    print("-" * len(header))
    for name, fn in WORKLOADS:
        times = {bk: best_of(fn, mod, args.repeat) for bk, mod in backends.items()}
        row = f"{name:<30}" + "".join(f"{times[bk] * 1e3:>10.1f}ms" for bk in backends)
        if "pure" in times and "fast" in times and times["fast"] > 0:
            row += f"{times['pure'] / times['fast']:>9.1f}x"
        print(row)


if __name__ == "__main__":
    main()

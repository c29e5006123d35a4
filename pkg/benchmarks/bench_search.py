#!/usr/bin/env python3
"""Benchmark the embedding search with the numba and numpy kernels.

Runs a few representative enumerations with each backend and prints a timing
table.  The first numba call includes JIT compilation, so every backend gets
an untimed warmup pass.

    python benchmarks/bench_search.py [--repeats N]
"""

import argparse
import time

from ballobs.kernels import HAVE_NUMBA, available_backends
from ballobs.lattice import (direct_sum, linear_lattice,
                             search_embedding_classes)

CASES = [
    ("chain (3,2,2,3,2) in Z^9", linear_lattice((3, 2, 2, 3, 2)), 9),
    ("chain (3,3,2,2,3,3,2) in Z^12", linear_lattice((3, 3, 2, 2, 3, 3, 2)), 12),
    ("pair lattice (2,2,2)+(2,3,2,2,3) in Z^9",
     direct_sum(linear_lattice((2, 2, 2)), linear_lattice((2, 3, 2, 2, 3))), 9),
    ("pair lattice (2,3,2,2,3)+(2,3,3,2,2,3,3) in Z^13",
     direct_sum(linear_lattice((2, 3, 2, 2, 3)),
                linear_lattice((2, 3, 3, 2, 2, 3, 3))), 13),
]


def time_case(lat, m, backend, repeats):
    search_embedding_classes(lat, m, backend=backend)  # warmup / JIT
    best = float("inf")
    result = None
    for _ in range(repeats):
        t0 = time.perf_counter()
        result = search_embedding_classes(lat, m, backend=backend)
        best = min(best, time.perf_counter() - t0)
    return best, result


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeats", type=int, default=5)
    args = parser.parse_args()

    backends = available_backends()
    if not HAVE_NUMBA:
        print("numba not importable; benchmarking the numpy backend only")
    print(f"{'case':<45} {'backend':<8} {'best (ms)':>10} {'nodes':>8} {'classes':>8}")
    for label, lat, m in CASES:
        timings = {}
        for backend in backends:
            best, result = time_case(lat, m, backend, args.repeats)
            timings[backend] = best
            print(f"{label:<45} {backend:<8} {best * 1e3:>10.2f} "
                  f"{result.stats.nodes:>8} {len(result.classes):>8}")
        if "numba" in timings and "numpy" in timings:
            ratio = timings["numpy"] / timings["numba"]
            print(f"{'':<45} numpy/numba = {ratio:.1f}x")


if __name__ == "__main__":
    main()

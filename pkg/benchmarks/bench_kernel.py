#!/usr/bin/env python3
"""Benchmark: compiled simplex kernel vs the pure-Python fallback.

Two workloads:
  * kernel-only: batches of random equality-form LPs solved directly;
  * pipeline: the full consistency/build/verify run on generated
    instances, which is dominated by LP solves.

The two kernels walk identical pivot sequences, so outputs are checked
for equality while timing.

Usage: python benchmarks/bench_kernel.py [--quick]
"""

import argparse
import random
import sys
import time
from fractions import Fraction as F

from credalkit import _simplex_py

try:
    from credalkit import _simplex_ext
except ImportError:
    _simplex_ext = None


def random_problem(rng, m, n):
    a = [
        [F(rng.randint(-6, 6), rng.randint(1, 4)) for _ in range(n)]
        for _ in range(m)
    ]
    b = [F(rng.randint(0, 6), rng.randint(1, 4)) for _ in range(m)]
    c = [F(rng.randint(-6, 6), rng.randint(1, 4)) for _ in range(n)]
    return m, n, a, b, c


def time_kernel(kernel, problems):
    start = time.perf_counter()
    results = [
        kernel.simplex_solve(m, n, [list(r) for r in a], list(b), list(c))
        for m, n, a, b, c in problems
    ]
    return time.perf_counter() - start, results


def bench_kernel_only(quick):
    shapes = [(4, 6, 400), (8, 12, 150), (14, 20, 40)]
    if quick:
        shapes = [(4, 6, 100), (8, 12, 40), (14, 20, 10)]
    print("kernel-only workload (random equality-form LPs)")
    print(f"{'shape':>12} {'pure':>10} {'compiled':>10} {'speedup':>9}")
    for m, n, count in shapes:
        rng = random.Random(1000 + m)
        problems = [random_problem(rng, m, n) for _ in range(count)]
        t_pure, r_pure = time_kernel(_simplex_py, problems)
        if _simplex_ext is None:
            print(f"{m}x{n} x{count:>4} {t_pure:>9.3f}s {'n/a':>10} {'n/a':>9}")
            continue
        t_ext, r_ext = time_kernel(_simplex_ext, problems)
        assert r_pure == r_ext, "kernels disagree"
        print(
            f"{m}x{n} x{count:>4} {t_pure:>9.3f}s {t_ext:>9.3f}s "
            f"{t_pure / t_ext:>8.1f}x"
        )


def bench_pipeline(quick):
    sys.path.insert(0, "tests")
    from gen import generated_instance

    import credalkit._backend as backend
    from credalkit.credal import (
        check_marginal_consistency,
        check_permutation_consistency,
    )
    from credalkit.joint import build_joint, verify_representation

    def run(kernel, instances):
        backend.simplex_solve = kernel.simplex_solve
        start = time.perf_counter()
        for _, coll, _ in instances:
            assert check_permutation_consistency(coll).passed
            assert check_marginal_consistency(coll).passed
            joint = build_joint(coll)
            assert verify_representation(coll, joint).passed
        return time.perf_counter() - start

    count = 2 if quick else 5
    rng = random.Random(42)
    instances = [generated_instance(rng, 3) for _ in range(count)]
    print()
    print(f"pipeline workload ({count} generated instances, 3 indices)")
    original = backend.simplex_solve
    try:
        t_pure = run(_simplex_py, instances)
        if _simplex_ext is None:
            print(f"pure: {t_pure:.2f}s; compiled kernel not built")
            return
        t_ext = run(_simplex_ext, instances)
    finally:
        backend.simplex_solve = original
    print(f"{'pure':>10}: {t_pure:.2f}s")
    print(f"{'compiled':>10}: {t_ext:.2f}s")
    print(f"{'speedup':>10}: {t_pure / t_ext:.1f}x")


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--quick", action="store_true", help="smaller workloads")
    args = parser.parse_args()
    if _simplex_ext is None:
        print("note: compiled kernel unavailable; timing the fallback only")
    bench_kernel_only(args.quick)
    bench_pipeline(args.quick)


if __name__ == "__main__":
    main()

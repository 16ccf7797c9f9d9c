"""Timing comparison of the compiled and pure assignment kernels.

Measures single non-singularity tests and full one-size-down submatrix
sweeps on random generic matrices, printing one table row per size.

Usage:  python benchmarks/bench_kernels.py [--sizes 4,6,8,10,12] [--repeats 200]
"""

import argparse
import itertools
import random
import time
from fractions import Fraction

from troprank import Matrix, tangible
from troprank.kernels import (
    BACKEND,
    HAVE_COMPILED,
    encode_matrix,
    first_nonsingular,
    is_nonsingular_enc,
)
from troprank import _kernels_py


def random_matrix(rng: random.Random, n: int) -> Matrix:
    vals = rng.sample(range(8 * n * n), n * n)
    return Matrix(
        range(n), range(n),
        [[tangible(Fraction(vals[i * n + j], 4)) for j in range(n)]
         for i in range(n)],
    )


def time_call(fn, repeats: int) -> float:
    best = float("inf")
    for _ in range(3):
        start = time.perf_counter()
        for _ in range(repeats):
            fn()
        best = min(best, time.perf_counter() - start)
    return best


def bench_single(enc, n: int, repeats: int):
    idx = list(range(n))
    compiled = None
    if enc.compiled_ok:
        compiled = time_call(lambda: is_nonsingular_enc(enc, idx, idx), repeats)
    pure = time_call(
        lambda: _kernels_py.is_nonsingular(enc.cost, enc.fin, enc.tang, idx, idx),
        repeats,
    )
    return compiled, pure


def bench_sweep(enc, n: int):
    subsets = list(itertools.combinations(range(n), n - 1))
    compiled = None
    if enc.compiled_ok:
        compiled = time_call(lambda: first_nonsingular(enc, subsets, subsets), 1)
    pure = time_call(
        lambda: _kernels_py.first_nonsingular(
            enc.cost, enc.fin, enc.tang, subsets, subsets, 0,
            len(subsets) * len(subsets),
        ),
        1,
    )
    return compiled, pure, len(subsets) ** 2


def fmt(seconds, per: int = 1) -> str:
    if seconds is None:
        return "      n/a"
    return f"{seconds / per * 1e6:8.1f}µ"


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--sizes", default="4,6,8,10,12",
                        help="comma-separated matrix sizes")
    parser.add_argument("--repeats", type=int, default=200,
                        help="repetitions for the single-call timing")
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()
    sizes = [int(s) for s in args.sizes.split(",")]

    print(f"backend: {BACKEND} (compiled available: {HAVE_COMPILED})")
    print(f"{'n':>3} {'single/compiled':>16} {'single/pure':>12} "
          f"{'sweep tests':>11} {'sweep/compiled':>15} {'sweep/pure':>11} "
          f"{'speedup':>8}")
    rng = random.Random(args.seed)
    for n in sizes:
        enc = encode_matrix(random_matrix(rng, n))
        single_c, single_p = bench_single(enc, n, args.repeats)
        sweep_c, sweep_p, tests = bench_sweep(enc, n)
        if sweep_c:
            speedup = f"{sweep_p / sweep_c:7.1f}x"
        else:
            speedup = "     n/a"
        print(f"{n:>3} {fmt(single_c, args.repeats):>16} "
              f"{fmt(single_p, args.repeats):>12} {tests:>11} "
              f"{fmt(sweep_c):>15} {fmt(sweep_p):>11} {speedup:>8}")


if __name__ == "__main__":
    main()

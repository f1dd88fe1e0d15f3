#!/usr/bin/env python3
"""Compare the numpy and numba evaluation backends.

Times batch map evaluation at several batch sizes and one full sampled
contraction check, verifying along the way that the two backends produce
bit-identical outputs.

Usage:
    python benchmarks/bench_backends.py [--sizes 10000 100000 1000000] [--repeat 5]
"""

import argparse
import time

import numpy as np

import fgfp.backends as backends
from fgfp import (ContractionFamily, FamilyKind, SamplerConfig, box_space,
                  check_contraction, eval_map_batch, parse_map)

MAPS = {
    "affine": parse_map("(4*a1 - 3*b1)/17", 1, 1, 1),
    "nonlinear": parse_map(
        "abs(min(a1, b1) - max(a1*b1/50, -3)) + (a1 - b1)/7", 1, 1, 1),
}


def _best_of(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench_eval(sizes, repeat):
    rng = np.random.default_rng(0)
    print(f"{'map':<10} {'n':>9} {'numpy (ms)':>12} {'numba (ms)':>12} {'speedup':>8}")
    for name, m in MAPS.items():
        for n in sizes:
            A = rng.uniform(-10, 10, (n, 1))
            B = rng.uniform(-10, 10, (n, 1))
            backends.set_backend("numpy")
            ref = eval_map_batch(m, A, B)
            t_np = _best_of(lambda: eval_map_batch(m, A, B), repeat)
            if backends.HAS_NUMBA:
                backends.set_backend("numba")
                eval_map_batch(m, A, B)  # warm up the JIT once
                jit = eval_map_batch(m, A, B)
                assert np.array_equal(ref, jit), "backends disagree"
                t_nb = _best_of(lambda: eval_map_batch(m, A, B), repeat)
                print(f"{name:<10} {n:>9} {t_np * 1e3:>12.3f} {t_nb * 1e3:>12.3f} "
                      f"{t_np / t_nb:>7.2f}x")
            else:
                print(f"{name:<10} {n:>9} {t_np * 1e3:>12.3f} {'n/a':>12} {'':>8}")


def bench_contraction(repeat):
    X = box_space((-float('inf'),), (0.0,))
    Y = box_space((0.0,), (float('inf'),))
    F = parse_map("(a1 - b1)/3", 1, 1, 1)
    G = parse_map("(a1 - b1)/5", 1, 1, 1)
    fam = ContractionFamily(FamilyKind.SYM_HALF, 2.0 / 3.0, 2.0 / 5.0)
    cfg = SamplerConfig(samples_per_check=200_000, rng_seed=0)
    print("\ncontraction check, 200k samples:")
    backends.set_backend("numpy")
    t_np = _best_of(lambda: check_contraction(F, G, X, Y, fam, cfg), repeat)
    print(f"  numpy: {t_np * 1e3:.1f} ms")
    if backends.HAS_NUMBA:
        backends.set_backend("numba")
        check_contraction(F, G, X, Y, fam, cfg)  # warm up
        t_nb = _best_of(lambda: check_contraction(F, G, X, Y, fam, cfg), repeat)
        print(f"  numba: {t_nb * 1e3:.1f} ms  ({t_np / t_nb:.2f}x)")


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--sizes", type=int, nargs="+",
                        default=[10_000, 100_000, 1_000_000])
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()
    print(f"numba available: {backends.HAS_NUMBA}")
    try:
        bench_eval(args.sizes, args.repeat)
        bench_contraction(args.repeat)
    finally:
        backends.set_backend("auto")


if __name__ == "__main__":
    main()

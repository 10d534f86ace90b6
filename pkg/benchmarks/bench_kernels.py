"""Compare the compiled rational kernels against the pure-Python fallback.

Run:  python3 benchmarks/bench_kernels.py [--sizes 6,10,14] [--repeat 5]

Both backends are loaded explicitly (ignoring the import-time selection) so
a single process can time them side by side on identical inputs.
"""

from __future__ import annotations

import argparse
import random
import time

from coxtoda._kern import pure

try:
    from coxtoda._kern import _fast as fast
except ImportError:  # pragma: no cover - no compiled extension available
    fast = None


def random_flat(rng: random.Random, n: int):
    num = [rng.randint(-9, 9) for _ in range(n * n)]
    den = [rng.randint(1, 9) for _ in range(n * n)]
    # keep it nonsingular with a dominant diagonal
    for i in range(n):
        num[i * n + i] = rng.randint(10, 20)
        den[i * n + i] = 1
    return num, den


def time_op(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--sizes", default="6,10,14")
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    sizes = [int(s) for s in args.sizes.split(",")]
    rng = random.Random(0)

    backends = [("pure", pure)] + ([("fast", fast)] if fast else [])
    print(f"{'op':<8}{'n':>4}" + "".join(f"{name:>12}" for name, _ in backends)
          + ("     speedup" if fast else ""))
    for n in sizes:
        an, ad = random_flat(rng, n)
        bn, bd = random_flat(rng, n)
        for op, call in (
            ("matmul", lambda m: m.mat_mul(an, ad, bn, bd, n, n, n)),
            ("det", lambda m: m.mat_det(an, ad, n)),
            ("inv", lambda m: m.mat_inv(an, ad, n)),
        ):
            times = [time_op(lambda m=mod: call(m), args.repeat)
                     for _, mod in backends]
            row = f"{op:<8}{n:>4}" + "".join(f"{t * 1e3:>10.2f}ms" for t in times)
            if fast:
                row += f"{times[0] / times[1]:>11.2f}x"
            print(row)
    # sanity: identical results
    if fast:
        assert pure.mat_det(an, ad, sizes[-1]) == fast.mat_det(an, ad, sizes[-1])
        assert pure.mat_mul(an, ad, bn, bd, n, n, n) == fast.mat_mul(an, ad, bn, bd, n, n, n)
        print("\nbackends agree on det and matmul for the last size")


if __name__ == "__main__":
    main()

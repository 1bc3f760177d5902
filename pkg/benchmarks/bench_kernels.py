"""Time the compiled kernels against their numpy fallbacks.

    python3 benchmarks/bench_kernels.py --rows 4096 --dim 8

Both variants are called directly, so the SCHWARZKIT_DISABLE_NUMBA flag
does not matter here.  Each line also checks that the two agree bit for bit.
"""

from __future__ import annotations

import argparse
import timeit

import numpy as np

from schwarzkit import kernels
from schwarzkit._accel import NUMBA_AVAILABLE

CASES = {
    "cdot": (kernels._cdot_nb, kernels._cdot_np, lambda A, B: (A, B)),
    "sqnorm": (kernels._sqnorm_nb, kernels._sqnorm_np, lambda A, B: (A,)),
    "residual": (kernels._residual_nb, kernels._residual_np, lambda A, B: (A, B, False)),
}


def best_of(fn, args, repeat):
    timer = timeit.Timer(lambda: fn(*args))
    number, _ = timer.autorange()
    return min(timer.repeat(repeat, number)) / number


def same(a, b):
    if isinstance(a, tuple):
        return all(np.array_equal(x, y) for x, y in zip(a, b))
    return np.array_equal(a, b)


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--rows", type=int, default=4096)
    parser.add_argument("--dim", type=int, nargs="+", default=[2, 8, 32])
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args(argv)
    if not NUMBA_AVAILABLE:
        print("numba is not installed; nothing to compare")
        return
    rng = np.random.default_rng(args.seed)
    print(f"{'kernel':<10}{'dim':>5}{'numba ms':>12}{'numpy ms':>12}{'speedup':>10}  identical")
    for dim in args.dim:
        shape = (args.rows, dim)
        A = rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
        B = rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
        for name, (nb, np_, pack) in CASES.items():
            call = pack(A, B)
            nb(*call)  # compile outside the timing
            t_nb = best_of(nb, call, args.repeat)
            t_np = best_of(np_, call, args.repeat)
            print(f"{name:<10}{dim:>5}{t_nb * 1e3:>12.3f}{t_np * 1e3:>12.3f}{t_np / t_nb:>9.1f}x  "
                  f"{same(nb(*call), np_(*call))}")


if __name__ == "__main__":
    main()

"""Benchmark the numba kernels against the pure-numpy reference.

Usage: python benchmarks/bench_kernels.py [--repeat N]

Prints one line per kernel with the best-of-N wall time for each flavor
and the speedup. If numba is unavailable (or disabled via
SQUEEZENHSE_NO_NUMBA), only the numpy path is timed.
"""

import argparse
import timeit

import numpy as np

from squeezenhse import _kernels


def bench(fn, *args, repeat):
    return min(timeit.repeat(lambda: fn(*args), number=1, repeat=repeat))


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5,
                        help="timing repetitions (best is reported)")
    args = parser.parse_args()

    rng = np.random.default_rng(0)
    n2, m = 5000, 5000          # 50x50 lattice worth of eigenvectors
    vectors = rng.normal(size=(n2, m)) + 1j * rng.normal(size=(n2, m))
    vectors /= np.linalg.norm(vectors, axis=0)
    x_index = np.repeat(np.arange(50), 50)
    grid = 1 << 16
    coeffs = [rng.normal(size=grid) + 1j * rng.normal(size=grid)
              for _ in range(3)]
    beta = rng.normal(size=grid) + 1j * rng.normal(size=grid)

    cases = [
        ("participation_sums", "_participation_sums", (vectors,)),
        ("layer_density_batch", "_layer_density_batch",
         (vectors, x_index, 50)),
        ("quad_roots_grid", "_quad_roots_grid",
         (*coeffs, 0.85 + 7.59j)),
        ("laurent_eval_grid", "_laurent_eval_grid", (*coeffs, beta)),
    ]

    print(f"{'kernel':<22} {'numpy [s]':>10} {'numba [s]':>10} {'speedup':>8}")
    for name, stem, call_args in cases:
        np_fn = getattr(_kernels, stem + "_np")
        t_np = bench(np_fn, *call_args, repeat=args.repeat)
        if _kernels.USE_NUMBA:
            nb_fn = getattr(_kernels, stem + "_nb")
            nb_fn(*call_args)    # warm up the JIT outside the timer
            t_nb = bench(nb_fn, *call_args, repeat=args.repeat)
            print(f"{name:<22} {t_np:>10.4f} {t_nb:>10.4f} "
                  f"{t_np / t_nb:>7.2f}x")
        else:
            print(f"{name:<22} {t_np:>10.4f} {'-':>10} {'-':>8}")


if __name__ == "__main__":
    main()

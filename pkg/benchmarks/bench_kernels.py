"""Compare the jit-compiled polynomial kernels against the pure-numpy path.

Run directly:  python3 benchmarks/bench_kernels.py
The numpy path is what you get with RANKONE_NO_NUMBA=1.
"""

import time

import numpy as np

from rankone import _kernels
from rankone.poly import monomial_exponents, num_monomials


def _time(fn, *args, repeat=2000):
    fn(*args)  # warm-up / compile
    t0 = time.perf_counter()
    for _ in range(repeat):
        fn(*args)
    return (time.perf_counter() - t0) / repeat


def main():
    rng = np.random.default_rng(0)
    print(f"numba available: {_kernels.HAVE_NUMBA}, requested: {_kernels.NUMBA_REQUESTED}")
    print(f"{'case':<22}{'numpy (us)':>12}{'numba (us)':>12}{'speedup':>9}")
    for d, n in [(3, 2), (6, 3), (8, 4), (10, 5)]:
        expo = monomial_exponents(d, n)
        coeffs = rng.standard_normal(num_monomials(d, n))
        x = rng.standard_normal(n)
        xs = rng.standard_normal((64, n))
        cases = [
            (f"eval d={d} n={n}", _kernels._eval_np, _kernels._eval_nb, (coeffs, expo, x)),
            (f"grad d={d} n={n}", _kernels._grad_np, _kernels._grad_nb, (coeffs, expo, x)),
            (
                f"eval64 d={d} n={n}",
                _kernels._eval_many_np,
                _kernels._eval_many_nb,
                (coeffs, expo, xs),
            ),
        ]
        for name, f_np, f_nb, args in cases:
            t_np = _time(f_np, *args)
            if _kernels.HAVE_NUMBA:
                t_nb = _time(f_nb, *args)
                print(f"{name:<22}{t_np * 1e6:>12.2f}{t_nb * 1e6:>12.2f}{t_np / t_nb:>9.1f}")
            else:
                print(f"{name:<22}{t_np * 1e6:>12.2f}{'-':>12}{'-':>9}")


if __name__ == "__main__":
    main()

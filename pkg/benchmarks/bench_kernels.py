"""Time the numba kernels against the pure-numpy fallback.

    python3 benchmarks/bench_kernels.py [--sizes 599,2399,9599] [--repeat 5]

Both backends are imported directly, so ZCWELL_DISABLE_NUMBA does not matter
here. The first numba call (compilation, or cache load) is excluded.
"""
import argparse
import time

import numpy as np

from zcwell.designer import twin_designs
from zcwell.kernels import numba_kernels, numpy_kernels
from zcwell.oracle import build_hamiltonian


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def cases(H, k):
    d, e = H.diag, H.offdiag
    lo, hi = d.min() - 2 * abs(e), d.max() + 2 * abs(e)
    abstol = 2 * np.finfo(float).eps * max(abs(lo), abs(hi))
    rhs = np.random.default_rng(0).standard_normal(d.shape[0])
    ks = np.linspace(0.1, 400.0, 4001)
    xs = np.array([0.0, 1 / 3, 2 / 3, 1.0])
    jumps = np.array([1.0, -1.0, -1.0, 1.0])
    return {
        f"bisect_lowest k={k}": lambda m: m.bisect_lowest(d, e, False, 0.0, k, lo, hi, abstol),
        "solve_shifted": lambda m: m.solve_shifted(d, e, False, 0.0, 14.6, rhs),
        "ft_cusp_sum 4001 k": lambda m: m.ft_cusp_sum(ks, xs, jumps),
    }


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", default="599,2399,9599")
    ap.add_argument("--k", type=int, default=5)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    if numba_kernels is None:
        raise SystemExit("numba is not available; nothing to compare")

    design = twin_designs()[0]
    print(f"{'kernel':<22}{'n':>7}{'numpy [ms]':>13}{'numba [ms]':>13}{'speedup':>9}  agree")
    for n in (int(s) for s in args.sizes.split(",")):
        H = build_hamiltonian(design.potential, n)
        for name, fn in cases(H, args.k).items():
            ref = fn(numba_kernels)  # warm-up / compile
            t_nb = best_of(lambda: fn(numba_kernels), args.repeat)
            t_np = best_of(lambda: fn(numpy_kernels), args.repeat)
            agree = np.allclose(ref, fn(numpy_kernels), rtol=1e-9, atol=1e-9)
            print(f"{name:<22}{n:>7}{1e3 * t_np:>13.3f}{1e3 * t_nb:>13.3f}{t_np / t_nb:>9.1f}  {agree}")


if __name__ == "__main__":
    main()

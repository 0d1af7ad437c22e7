"""Compare the compiled kernels with the numpy fallback.

    python benchmarks/bench_kernels.py [--repeat N]
"""

import argparse
import timeit

import numpy as np

from lorentzkit import _kernels_py
from lorentzkit.lie_algebra import builtin

try:
    from lorentzkit import _kernels
except ImportError:
    _kernels = None


def cases():
    rng = np.random.default_rng(0)
    for name in ("so(1,3)", "so(2,4)", "sl(5,R)", "so(1,6)"):
        c = builtin(name).algebra.c
        yield f"jacobi_residual {name} (dim {c.shape[0]})", "jacobi_residual", (c,)
    for nq, ng, d in ((200, 4000, 2), (500, 20000, 3)):
        q = rng.standard_normal((nq, d))
        g = rng.standard_normal((ng, d))
        yield f"nearest_points {nq}x{ng} in R^{d}", "nearest_points", (q, g)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    if _kernels is None:
        print("compiled extension not built; only the fallback is timed")
    print(f"{'case':<40} {'numpy ms':>10} {'cython ms':>10} {'speedup':>8}")
    for label, fn, argv in cases():
        py = getattr(_kernels_py, fn)
        t_py = min(timeit.repeat(lambda: py(*argv), number=1, repeat=args.repeat)) * 1e3
        if _kernels is None:
            print(f"{label:<40} {t_py:>10.3f} {'-':>10} {'-':>8}")
            continue
        cy = getattr(_kernels, fn)
        a, b = py(*argv), cy(*argv)
        if fn == "nearest_points":
            assert np.array_equal(a[0], b[0]) and np.allclose(a[1], b[1])
        else:
            assert abs(a[0] - b[0]) <= 1e-12
        t_cy = min(timeit.repeat(lambda: cy(*argv), number=1, repeat=args.repeat)) * 1e3
        print(f"{label:<40} {t_py:>10.3f} {t_cy:>10.3f} {t_py / t_cy:>7.1f}x")


if __name__ == "__main__":
    main()

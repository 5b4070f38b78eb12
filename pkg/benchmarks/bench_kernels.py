"""Time the compiled kernels against the numpy fallback.

Usage: python benchmarks/bench_kernels.py [--repeat N]
"""

import argparse
import timeit

import numpy as np

from encdec._backend import get_kernels
from encdec.approximator import total_degree_exponents


def cases(rng):
    pts1 = rng.random((4097, 1))
    ctr1 = ((np.arange(32) + 0.5) / 32)[:, None]
    g = (np.arange(10) + 0.5) / 10
    ctr2 = np.stack(np.meshgrid(g, g, indexing="ij"), -1).reshape(-1, 2)
    pts2 = rng.random((4000, 2))
    lower, upper = np.zeros(2), np.ones(2)
    shape2 = np.array([65, 65])
    vals = rng.normal(size=65 * 65)
    rows = rng.normal(size=(64, 4097))
    x = rng.random((2000, 3))
    exps = total_degree_exponents(3, 4)
    return {
        "pou_weights 1-D (4097 x 32)": lambda k: k.pou_weights(pts1, ctr1, 1 / 32),
        "pou_weights 2-D (4000 x 100)": lambda k: k.pou_weights(pts2, ctr2, 0.1),
        "interp_stencil 2-D (4000)": lambda k: k.interp_stencil(lower, upper, shape2, pts2),
        "interp_eval 2-D (4000)": lambda k: k.interp_eval(vals, *k.interp_stencil(lower, upper, shape2, pts2)),
        "cumulative_trapezoid (64 x 4097)": lambda k: k.cumulative_trapezoid(rows, 1 / 4096),
        "monomial_design (2000 x 35)": lambda k: k.monomial_design(x, exps),
    }


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=20)
    args = ap.parse_args()
    py = get_kernels("python")
    try:
        c = get_kernels("compiled")
    except ImportError:
        print("compiled kernels are not built; run `pip install -e . --no-build-isolation` first")
        return 1
    rng = np.random.default_rng(0)
    print(f"{'kernel':<36}{'python ms':>12}{'compiled ms':>14}{'speedup':>10}")
    for name, fn in cases(rng).items():
        tp = min(timeit.repeat(lambda: fn(py), number=1, repeat=args.repeat)) * 1e3
        tc = min(timeit.repeat(lambda: fn(c), number=1, repeat=args.repeat)) * 1e3
        print(f"{name:<36}{tp:>12.3f}{tc:>14.3f}{tp / tc:>9.1f}x")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())

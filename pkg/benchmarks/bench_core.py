"""Compare the compiled kernels with the numpy fallback.

Usage: python3 benchmarks/bench_core.py [--repeat N]
"""

import argparse
import timeit

import numpy as np

from artifact import _pycore
from artifact.lagrangian import enumerate_sigma

try:
    from artifact import _core
except ImportError:  # extension not built
    _core = None


def cases():
    rng = np.random.default_rng(0)
    d = 31
    T = enumerate_sigma(d)[5]
    elems = T.elements
    psi = rng.normal(size=d) + 1j * rng.normal(size=d)
    coeffs = np.array([1, 2, 3, 4], dtype=np.int64)
    d2 = 13
    T2 = enumerate_sigma(d2)[4]
    sidx, swt = _pycore.sym_tables(d2)
    pi = int(sidx.max()) + 1

    def sym(mod):
        out = np.zeros((pi, pi))
        mod.sym_block(d2, T2.elements, sidx, swt, out, 1.0)

    return {
        "gauss_sum d=997": lambda m: m.gauss_sum(997, 5, 3),
        "span_elements d=31": lambda m: m.span_elements(d, T.generators),
        "cubic_diff_counts d=31": lambda m: m.cubic_diff_counts(d, elems, coeffs),
        "kappa_sum d=31": lambda m: m.kappa_sum(elems, psi),
        "sym_block d=13": sym,
    }


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    print(f"{'kernel':26s} {'python [ms]':>12s} {'cython [ms]':>12s} {'speedup':>8s}")
    for name, fn in cases().items():
        tp = min(timeit.repeat(lambda: fn(_pycore), number=1, repeat=args.repeat)) * 1e3
        if _core is None:
            print(f"{name:26s} {tp:12.3f} {'n/a':>12s} {'n/a':>8s}")
            continue
        tc = min(timeit.repeat(lambda: fn(_core), number=1, repeat=args.repeat)) * 1e3
        print(f"{name:26s} {tp:12.3f} {tc:12.3f} {tp / tc:8.1f}x")


if __name__ == "__main__":
    main()

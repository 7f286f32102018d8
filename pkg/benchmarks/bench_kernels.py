"""Time the compiled kernels against the numpy fallback.

Run with ``python3 benchmarks/bench_kernels.py``; pass ``--repeat N`` to
change the number of timed runs (the best run is reported).
"""

import argparse
import time

import numpy as np

from bisimp import _kernels_py
from bisimp.fingroup import dihedral, direct_product, symmetric

try:
    from bisimp import _ckernels
except ImportError:  # extension not built
    _ckernels = None


def best_of(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t)
    return best


def cases():
    s6 = symmetric(6)
    s7 = symmetric(7)
    d4 = dihedral(4)
    d4sq = direct_product(d4, d4).group
    big = direct_product(d4sq, d4).group  # order 512
    yield ("enumerate S7 (5040)", "enumerate_perms",
           (s7.perms[list(s7.generators)].copy(), 100_000))
    yield ("enumerate D4^3 (512)", "enumerate_perms",
           (big.perms[list(big.generators)].copy(), 100_000))
    maps = np.stack([s7.right_map(g) for g in s7.generators])
    mask = np.zeros(s7.order, dtype=bool)
    mask[0] = True
    yield ("closure in S7 from identity", "bfs_closure", (maps, mask))
    t = s6.table
    yield ("hom check S6 -> S6 (720^2 pairs)", "hom_violation",
           (t, t, np.arange(s6.order, dtype=np.int64)))


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)
    if _ckernels is None:
        print("compiled kernels not built; only the fallback is timed")
    print(f"{'case':40s} {'numpy (s)':>10s} {'cython (s)':>11s} {'speedup':>8s}")
    for label, name, fargs in cases():
        def run(mod):
            a = [x.copy() if isinstance(x, np.ndarray) else x for x in fargs]
            return lambda: getattr(mod, name)(*a)

        py = best_of(run(_kernels_py), args.repeat)
        if _ckernels is not None:
            cy = best_of(run(_ckernels), args.repeat)
            print(f"{label:40s} {py:10.4f} {cy:11.4f} {py / cy:7.1f}x")
        else:
            print(f"{label:40s} {py:10.4f} {'-':>11s} {'-':>8s}")


if __name__ == "__main__":
    main()

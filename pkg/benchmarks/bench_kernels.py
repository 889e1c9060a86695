"""Compare kernel backends.

Integer kernels: numba against pure numpy, on leaf distance matrices and the
batch three-leaf quadruple scan.  Exact LP: gmpy2 rationals against
``fractions.Fraction`` on full oracle decisions.

    python benchmarks/bench_kernels.py [--trees 2000] [--leaves 10]
"""
import argparse
import random
import time
from fractions import Fraction

from pcgtools import _kernels, lp
from pcgtools.graph import cycle, split_antimatching, split_matching
from pcgtools.oracle import decide
from pcgtools.tree import LPG, MLPG, PCG, integer_scaled, random_weighted_tree


def timed(fn, repeat=3):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench_kernels(n_trees, n_leaves):
    rng = random.Random(0)
    inputs = [integer_scaled(random_weighted_tree(n_leaves, rng, multifurcating=True))[:4] for _ in range(n_trees)]
    backends = ["numpy"] + (["numba"] if _kernels.HAVE_NUMBA else [])
    mats = [_kernels.leaf_distance_matrix(*a, backend="numpy") for a in inputs]
    for b in backends:  # warm-up, includes any JIT compilation
        _kernels.leaf_distance_matrix(*inputs[0], backend=b)
        _kernels.lemma_violations(mats[0], backend=b)
    print(f"kernels: {n_trees} trees with {n_leaves} leaves")
    for b in backends:
        dist = timed(lambda: [_kernels.leaf_distance_matrix(*a, backend=b) for a in inputs])
        scan = timed(lambda: [_kernels.lemma_violations(m, backend=b) for m in mats])
        print(f"  {b:6s}  distance matrix {dist * 1e3:9.1f} ms   quadruple scan {scan * 1e3:9.1f} ms")


def bench_lp():
    cases = [
        ("C6 mLPG", cycle(6), MLPG),
        ("split_matching(3) mLPG", split_matching(3), MLPG),
        ("split_antimatching(3) LPG", split_antimatching(3), LPG),
        ("C6 PCG", cycle(6), PCG),
    ]
    backends = [("fraction", Fraction)]
    if lp.NUMBER_BACKEND == "gmpy2":
        backends.insert(0, ("gmpy2", lp.Q))
    print("exact LP decisions")
    saved = lp.Q
    try:
        for label, g, cls in cases:
            row = []
            for name, q in backends:
                lp.Q = q
                row.append(f"{name} {timed(lambda: decide(g, cls), repeat=2) * 1e3:8.1f} ms")
            print(f"  {label:28s} " + "   ".join(row))
    finally:
        lp.Q = saved


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--trees", type=int, default=2000)
    ap.add_argument("--leaves", type=int, default=10)
    args = ap.parse_args()
    bench_kernels(args.trees, args.leaves)
    bench_lp()


if __name__ == "__main__":
    main()

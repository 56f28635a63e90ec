"""Time each hot kernel under the numba and numpy backends.

Usage: python3 benchmarks/bench_kernels.py [--repeat N]

The first numba call includes JIT compilation (or a cache load), so it is
warmed up once before timing. Results are checked for equality as a side
effect, since a fast wrong answer is not a speedup.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from cmbound.ffcurves import _census_inputs, class_table
from cmbound.ffield import make_field
from cmbound.gl2 import gl2
from cmbound.kernels import _numba, _numpy


def _cases():
    F4 = make_field(5, 4)
    t4, n4a3, t27b2, terms = _census_inputs(F4)
    F3 = make_field(5, 3)
    t3, *_ = _census_inputs(F3)
    classes3 = class_table(F3)
    cube3 = t3.power(np.arange(F3.q), 3)
    G = gl2(5)
    rng = np.random.default_rng(0)
    gens = rng.integers(0, G.order, size=(40, 2))
    chi = _numpy.legendre_table(997)
    av, bv = rng.integers(0, 997, size=(2, 400))
    mat = rng.integers(0, 5, size=(120, 120))
    return {
        "census f=4 (classify_pairs)":
            lambda k: k.classify_pairs(5, F4.q, t4.digits, t4.pw, t4.exp, t4.log, n4a3, t27b2, terms),
        "traces f=3 (pair_traces)":
            lambda k: k.pair_traces(5, F3.q, t3.digits, t3.pw, t3.exp, t3.log, t3.chi, cube3, classes3),
        "disk Y=2e5 (disk_residue_hist)":
            lambda k: k.disk_residue_hist(1, False, 4 * 10**10 - 1),
        "400 curves over F_997 (prime_traces)":
            lambda k: k.prime_traces(av, bv, 997, chi),
        "40 closures in GL2(F5) (group_closure)":
            lambda k: [k.group_closure(G.table, np.array([G.identity]), g) for g in gens],
        "120x120 nullspace mod 5":
            lambda k: k.nullspace_mod_p(mat.copy(), 5),
    }


def _time(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def _same(a, b):
    if isinstance(a, list):
        return all(np.array_equal(x, y) for x, y in zip(a, b))
    return np.array_equal(a, b)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    print(f"{'kernel':<40} {'numba s':>10} {'numpy s':>10} {'speedup':>8}  equal")
    for name, call in _cases().items():
        call(_numba)  # warm-up / JIT
        tn, out_n = _time(lambda: call(_numba), args.repeat)
        tp, out_p = _time(lambda: call(_numpy), args.repeat)
        print(f"{name:<40} {tn:>10.4f} {tp:>10.4f} {tp / tn:>8.1f}  {_same(out_n, out_p)}")


if __name__ == "__main__":
    main()

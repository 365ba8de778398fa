#!/usr/bin/env python3
"""Benchmark the compiled kernels against the pure-Python fallback.

Run after building the extension:

    python benchmarks/bench_kernels.py
"""

import time

import numpy as np

from spin2 import _pykernels, kernels
from spin2.exact import _power_table, _prepare
from spin2.graphs import EMPTY_PINS, Graph
from spin2.params import Params
from spin2.scan import random_graphs
from spin2.weitz import _csr, _pins_array

try:
    from spin2 import _ckernels
except ImportError:
    _ckernels = None


def time_call(fn, *args, repeat=3):
    best = float("inf")
    value = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        value = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return value, best


def bench_partition(n: int) -> None:
    g = random_graphs(4, n, 1, seed=3)[0]
    p = Params(0.8 + 0.1j, 1.4 - 0.05j, 0.9 + 0.2j)
    masks, pp, pm, fd, cpp, cmm, npl = _prepare(g, EMPTY_PINS, None)
    pb = _power_table(p.beta, g.num_edges + 1)
    pg = _power_table(p.gamma, g.num_edges + 1)
    pl = _power_table(p.lam, g.n + 1)
    args = (masks, pp, pm, fd, cpp, cmm, npl, pb, pg, pl)
    z_py, t_py = time_call(_pykernels.partition_sum, *args)
    print(f"partition_sum  n={n:2d}  python {t_py * 1e3:9.2f} ms", end="")
    if _ckernels is not None:
        z_c, t_c = time_call(_ckernels.partition_sum, *args)
        assert abs(z_py - z_c) <= 1e-9 * max(1.0, abs(z_py))
        print(f"   cython {t_c * 1e3:9.2f} ms   speedup {t_py / t_c:7.1f}x")
    else:
        print("   (extension not built)")


def bench_saw(n: int) -> None:
    g = random_graphs(4, n, 1, seed=11)[0]
    p = Params(0.7, 1.3, 0.9)
    indptr, indices = _csr(g)
    pins = _pins_array(g, EMPTY_PINS)
    args = (indptr, indices, pins, 0, p.beta, p.gamma, p.lam, -1, p.lam, False)
    r_py, t_py = time_call(_pykernels.saw_ratio, *args)
    print(f"saw_ratio      n={n:2d}  python {t_py * 1e3:9.2f} ms", end="")
    if _ckernels is not None:
        r_c, t_c = time_call(_ckernels.saw_ratio, *args)
        assert abs(r_py - r_c) <= 1e-9 * max(1.0, abs(r_py))
        print(f"   cython {t_c * 1e3:9.2f} ms   speedup {t_py / t_c:7.1f}x")
    else:
        print("   (extension not built)")


def main() -> None:
    print(f"active backend: {kernels.BACKEND}")
    for n in (14, 18, 20):
        bench_partition(n)
    for n in (10, 11, 12):
        bench_saw(n)


if __name__ == "__main__":
    main()

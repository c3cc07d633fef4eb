#!/usr/bin/env python3
"""Benchmark the compiled cyclic-Jacobi kernel against the pure-Python twin.

Times full eigendecompositions of random symmetric matrices and of the
cycle-family Laplacian (the workload the sweeps and the optimizer hammer),
and reports the speedup.  numpy.linalg.eigh timings are shown for scale.

Usage: python benchmarks/bench_jacobi.py [--sizes 40,80,160] [--repeats 3]
"""
import argparse
import time

import numpy as np

from specmax import _jacobi_py, assemble_laplacian, cycle_graph
from specmax._kernels import cyclic_jacobi
from specmax.cycles import cycle_lt

try:
    from specmax import _jacobi

    HAVE_COMPILED = True
except ImportError:
    HAVE_COMPILED = False


def time_kernel(matrix, kernel, repeats):
    best = np.inf
    for _ in range(repeats):
        t0 = time.perf_counter()
        w, _, _, _ = cyclic_jacobi(matrix, kernel=kernel)
        best = min(best, time.perf_counter() - t0)
    return best, w


def time_eigh(matrix, repeats):
    best = np.inf
    for _ in range(repeats):
        t0 = time.perf_counter()
        w = np.linalg.eigvalsh(matrix)
        best = min(best, time.perf_counter() - t0)
    return best, w


def bench(name, matrix, repeats):
    t_py, w_py = time_kernel(matrix, _jacobi_py.jacobi_kernel, repeats)
    row = f"{name:<28} python {t_py * 1e3:9.2f} ms"
    if HAVE_COMPILED:
        t_c, w_c = time_kernel(matrix, _jacobi.jacobi_kernel, repeats)
        agree = np.abs(w_py - w_c).max() <= 1e-9 * max(np.abs(w_py).max(), 1.0)
        row += f"   compiled {t_c * 1e3:9.2f} ms   speedup {t_py / t_c:6.1f}x"
        if not agree:
            row += "   [WARNING: backends disagree]"
    t_e, _ = time_eigh(matrix, repeats)
    row += f"   (eigh {t_e * 1e3:7.2f} ms)"
    print(row)


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--sizes", default="40,80,160")
    parser.add_argument("--repeats", type=int, default=3)
    args = parser.parse_args()

    if not HAVE_COMPILED:
        print("note: compiled kernel not built; showing the fallback only\n")

    rng = np.random.default_rng(0)
    for n in (int(s) for s in args.sizes.split(",")):
        m = rng.normal(size=(n, n))
        bench(f"random symmetric {n}x{n}", (m + m.T) / 2, args.repeats)

    for n, t in ((100, 1e-2), (200, 1e-4)):
        mat = assemble_laplacian(cycle_graph(n), cycle_lt(n, t)).entries
        bench(f"cycle family n={n} t={t:g}", mat, args.repeats)


if __name__ == "__main__":
    main()

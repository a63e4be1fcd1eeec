#!/usr/bin/env python3
"""Benchmark the Jacobi eigensolver backends against each other and
numpy.linalg.eigh.

Run from the repository root:

    python benchmarks/bench_jacobi.py [--sizes 4 16 64] [--repeats 20]

The numba backend is compiled once before timing so JIT cost is excluded.
"""

import argparse
import time

import numpy as np

from switchlab._kernels import MAX_SWEEPS, OFFDIAG_TOL, _jacobi_sweeps_loops, _jacobi_sweeps_numpy

try:
    from numba import njit

    _loops_jit = njit(cache=True)(_jacobi_sweeps_loops)
except ImportError:
    _loops_jit = None


def solve(sweeps_fn, h):
    a = 0.5 * (h + h.conj().T)
    v = np.eye(h.shape[0], dtype=np.complex128)
    sweeps_fn(a, v, OFFDIAG_TOL, MAX_SWEEPS)
    w = np.diag(a).real
    order = np.argsort(w, kind="stable")
    return w[order], v[:, order]


def time_solver(label, fn, matrices, repeats):
    fn(matrices[0])  # warm up (JIT compile / cache effects)
    start = time.perf_counter()
    for _ in range(repeats):
        for h in matrices:
            fn(h)
    elapsed = (time.perf_counter() - start) / (repeats * len(matrices))
    print(f"  {label:22s} {elapsed * 1e6:10.1f} us/matrix")
    return elapsed


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--sizes", type=int, nargs="+", default=[4, 16, 64])
    parser.add_argument("--repeats", type=int, default=20)
    parser.add_argument("--batch", type=int, default=8)
    args = parser.parse_args()

    rng = np.random.default_rng(0)
    for n in args.sizes:
        matrices = []
        for _ in range(args.batch):
            g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
            matrices.append(g + g.conj().T)
        print(f"n = {n} ({args.batch} matrices, {args.repeats} repeats)")
        t_numpy = time_solver("jacobi numpy path", lambda h: solve(_jacobi_sweeps_numpy, h), matrices, args.repeats)
        if _loops_jit is not None:
            t_jit = time_solver("jacobi numba path", lambda h: solve(_loops_jit, h), matrices, args.repeats)
            print(f"  {'numba speedup':22s} {t_numpy / t_jit:10.1f} x")
        time_solver("numpy.linalg.eigh", lambda h: np.linalg.eigh(h), matrices, args.repeats)
        # agreement check between the two paths
        w_np, _ = solve(_jacobi_sweeps_numpy, matrices[0])
        if _loops_jit is not None:
            w_jit, _ = solve(_loops_jit, matrices[0])
            print(f"  max |w_numba - w_numpy| = {np.abs(w_jit - w_np).max():.2e}")


if __name__ == "__main__":
    main()

#!/usr/bin/env python3
"""Benchmark the compiled consensus kernel against the Python fallback.

Times the masked consensus loop on the reference problem size (10 nodes,
4-dim state, alternating two-entry masks) and on a larger stress case,
then verifies both backends produce bit-identical results.

Usage:
  python benchmarks/bench_kernels.py [--repeat 5]
"""

import argparse
import time

import numpy as np

from icfpie._kernels import kernel_backend
from icfpie._kernels._consensus_py import run_masked_consensus as py_kernel

try:
    from icfpie._kernels._consensus_cy import run_masked_consensus as cy_kernel
except ImportError:
    cy_kernel = None


def make_problem(n_nodes, n, seed=0):
    rng = np.random.default_rng(seed)
    raw = rng.normal(size=(n_nodes, n, n))
    B = (raw + raw.transpose(0, 2, 1)) / 2 + n * np.eye(n)
    b = rng.normal(size=(n_nodes, n))
    adj = rng.random((n_nodes, n_nodes)) < 0.4
    adj = adj | adj.T
    np.fill_diagonal(adj, False)
    hoods = [np.array(sorted(set(np.flatnonzero(adj[i]).tolist()) | {i}), dtype=np.intp)
             for i in range(n_nodes)]
    indptr = np.zeros(n_nodes + 1, dtype=np.intp)
    for i, h in enumerate(hoods):
        indptr[i + 1] = indptr[i] + len(h)
    indices = np.concatenate(hoods)
    half = np.arange(0, n, 2, dtype=np.intp)
    other = np.arange(1, n, 2, dtype=np.intp)
    mask_rows = np.concatenate([half, other])
    mask_bounds = np.array([0, half.size, n], dtype=np.intp)
    eps = 1.0 / (adj.sum(axis=1).max() + 1.0)
    return B, b, indptr, indices, mask_rows, mask_bounds, eps


def time_kernel(kernel, problem, L, repeat):
    B, b, indptr, indices, mask_rows, mask_bounds, eps = problem
    kernel(B, b, indptr, indices, mask_rows, mask_bounds, L, eps)  # warm up
    best = np.inf
    for _ in range(repeat):
        t0 = time.perf_counter()
        kernel(B, b, indptr, indices, mask_rows, mask_bounds, L, eps)
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()

    print(f"selected backend at import: {kernel_backend()}")
    if cy_kernel is None:
        print("compiled kernel not built; run `pip install -e .` with a C compiler")
        return

    cases = [
        ("reference size (N=10, n=4, L=1000)", make_problem(10, 4), 1000),
        ("large network (N=100, n=4, L=200)", make_problem(100, 4, seed=1), 200),
        ("large state (N=10, n=32, L=200)", make_problem(10, 32, seed=2), 200),
    ]
    print(f"{'case':40s} {'python':>10s} {'compiled':>10s} {'speedup':>8s}")
    for name, problem, L in cases:
        t_py = time_kernel(py_kernel, problem, L, args.repeat)
        t_cy = time_kernel(cy_kernel, problem, L, args.repeat)
        out_py = py_kernel(*problem[:6], L, problem[6])
        out_cy = cy_kernel(*problem[:6], L, problem[6])
        identical = (np.array_equal(out_py[0], out_cy[0])
                     and np.array_equal(out_py[1], out_cy[1]))
        print(f"{name:40s} {t_py * 1e3:9.2f}ms {t_cy * 1e3:9.2f}ms "
              f"{t_py / t_cy:7.1f}x  bit-identical: {identical}")


if __name__ == "__main__":
    main()

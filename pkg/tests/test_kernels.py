"""Backend equivalence and semantics of the consensus kernels."""

import subprocess
import sys

import numpy as np
import pytest

from conftest import random_spd
from icfpie._kernels import kernel_backend
from icfpie._kernels._consensus_py import run_masked_consensus as py_kernel

try:
    from icfpie._kernels._consensus_cy import run_masked_consensus as cy_kernel
    HAVE_COMPILED = True
except ImportError:
    cy_kernel = None
    HAVE_COMPILED = False


def make_problem(seed, n_nodes=10, n=4):
    rng = np.random.default_rng(seed)
    B = np.array([random_spd(rng, n) for _ in range(n_nodes)])
    b = rng.normal(size=(n_nodes, n))
    adj = rng.random((n_nodes, n_nodes)) < 0.35
    adj = adj | adj.T
    np.fill_diagonal(adj, False)
    hoods = [np.array(sorted(set(np.flatnonzero(adj[i]).tolist()) | {i}), dtype=np.intp)
             for i in range(n_nodes)]
    indptr = np.zeros(n_nodes + 1, dtype=np.intp)
    for i, h in enumerate(hoods):
        indptr[i + 1] = indptr[i] + len(h)
    indices = np.concatenate(hoods)
    return B, b, indptr, indices, adj


CASE1_ROWS = np.array([0, 2, 1, 3], dtype=np.intp)
CASE1_BOUNDS = np.array([0, 2, 4], dtype=np.intp)


@pytest.mark.skipif(not HAVE_COMPILED, reason="compiled kernel unavailable")
@pytest.mark.parametrize("L", [1, 2, 7, 64, 1000])
def test_backends_bit_identical(L):
    B, b, indptr, indices, _ = make_problem(seed=3)
    out_py = py_kernel(B, b, indptr, indices, CASE1_ROWS, CASE1_BOUNDS, L, 0.13)
    out_cy = cy_kernel(B, b, indptr, indices, CASE1_ROWS, CASE1_BOUNDS, L, 0.13)
    assert np.array_equal(out_py[0], out_cy[0])
    assert np.array_equal(out_py[1], out_cy[1])


def test_inputs_not_modified():
    B, b, indptr, indices, _ = make_problem(seed=5)
    B0, b0 = B.copy(), b.copy()
    py_kernel(B, b, indptr, indices, CASE1_ROWS, CASE1_BOUNDS, 8, 0.1)
    assert np.array_equal(B, B0) and np.array_equal(b, b0)


def test_unselected_rows_untouched():
    B, b, indptr, indices, _ = make_problem(seed=6)
    out_B, out_b = py_kernel(B, b, indptr, indices,
                             np.array([0, 2], dtype=np.intp),
                             np.array([0, 2], dtype=np.intp), 9, 0.11)
    assert np.array_equal(out_B[:, [1, 3], :], B[:, [1, 3], :])
    assert np.array_equal(out_b[:, [1, 3]], b[:, [1, 3]])
    assert not np.array_equal(out_B[:, [0, 2], :], B[:, [0, 2], :])


@pytest.mark.parametrize("cycles", [1, 3, 10])
def test_full_cycles_match_consensus_matrix_power_oracle(cycles):
    # after c full cycles every row has been averaged exactly c times, so
    # the result is (I - eps * graph_laplacian)^c applied row-wise
    B, b, indptr, indices, adj = make_problem(seed=9)
    deg = adj.sum(axis=1)
    eps = 1.0 / (deg.max() + 1.0)
    pi = np.eye(adj.shape[0]) - eps * (np.diag(deg) - adj.astype(float))
    pi_c = np.linalg.matrix_power(pi, cycles)

    out_B, out_b = py_kernel(B, b, indptr, indices, CASE1_ROWS, CASE1_BOUNDS,
                             2 * cycles, eps)
    expected_B = np.einsum("ij,jrc->irc", pi_c, B)
    expected_b = pi_c @ b
    assert np.allclose(out_B, expected_B, atol=1e-10)
    assert np.allclose(out_b, expected_b, atol=1e-10)


def test_backend_env_override():
    code = (
        "import icfpie; "
        "print(icfpie.kernel_backend())"
    )
    out = subprocess.run([sys.executable, "-c", code],
                         env={"ICFPIE_KERNEL": "python", "PATH": "/usr/bin:/bin"},
                         capture_output=True, text=True)
    assert out.stdout.strip() == "python"


def test_selected_backend_reported():
    assert kernel_backend() in ("compiled", "python")

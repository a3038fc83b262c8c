# cython: boundscheck=False, wraparound=False, initializedcheck=False, cdivision=True
"""Compiled consensus kernel: masked neighborhood averaging over small
matrix/vector stacks.

Mirrors _consensus_py.run_masked_consensus with identical floating-point
operation order (neighbor accumulation left to right, then one fused
B + eps * acc update per element), so both backends give bit-identical
results. Unselected rows are copied, never recomputed.
"""

import numpy as np


def run_masked_consensus(B, b, indptr, indices, mask_rows, mask_bounds, L, eps):
    """See _consensus_py.run_masked_consensus; same contract and semantics."""
    B_cur = np.array(B, dtype=np.float64, order="C")
    b_cur = np.array(b, dtype=np.float64, order="C")
    B_nxt = np.empty_like(B_cur)
    b_nxt = np.empty_like(b_cur)

    cdef double[:, :, ::1] Bc = B_cur
    cdef double[:, ::1] bc = b_cur
    cdef double[:, :, ::1] Bn = B_nxt
    cdef double[:, ::1] bn = b_nxt
    cdef Py_ssize_t[::1] iptr = np.ascontiguousarray(indptr, dtype=np.intp)
    cdef Py_ssize_t[::1] idx = np.ascontiguousarray(indices, dtype=np.intp)
    cdef Py_ssize_t[::1] mrows = np.ascontiguousarray(mask_rows, dtype=np.intp)
    cdef Py_ssize_t[::1] mbounds = np.ascontiguousarray(mask_bounds, dtype=np.intp)

    cdef Py_ssize_t n_nodes = Bc.shape[0]
    cdef Py_ssize_t n = Bc.shape[1]
    cdef Py_ssize_t theta = mbounds.shape[0] - 1
    cdef Py_ssize_t steps = L
    cdef double gain = eps

    cdef Py_ssize_t l, z, i, j, jj, r, c, k, r0, r1
    cdef double acc, base
    cdef double[:, :, ::1] tmp3
    cdef double[:, ::1] tmp2

    for l in range(steps):
        z = l % theta
        r0 = mbounds[z]
        r1 = mbounds[z + 1]
        # carry over every entry, then recompute the selected rows
        Bn[:, :, :] = Bc
        bn[:, :] = bc
        for i in range(n_nodes):
            for k in range(r0, r1):
                r = mrows[k]
                for c in range(n):
                    base = Bc[i, r, c]
                    acc = 0.0
                    for jj in range(iptr[i], iptr[i + 1]):
                        j = idx[jj]
                        acc += Bc[j, r, c] - base
                    Bn[i, r, c] = base + gain * acc
                base = bc[i, r]
                acc = 0.0
                for jj in range(iptr[i], iptr[i + 1]):
                    j = idx[jj]
                    acc += bc[j, r] - base
                bn[i, r] = base + gain * acc
        tmp3 = Bc
        Bc = Bn
        Bn = tmp3
        tmp2 = bc
        bc = bn
        bn = tmp2
        B_cur, B_nxt = B_nxt, B_cur
        b_cur, b_nxt = b_nxt, b_cur

    return B_cur, b_cur

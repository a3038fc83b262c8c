"""Pure-Python consensus kernel (fallback for the compiled extension).

Keeps the exact floating-point operation order of the compiled kernel:
per selected row element, neighbor differences accumulate left to right
in neighbor-list order, then a single fused update B + eps * acc. Rows
outside the step's selection are copied untouched, so they stay
bit-identical.
"""

import numpy as np


def run_masked_consensus(B, b, indptr, indices, mask_rows, mask_bounds, L, eps):
    """Run L synchronous masked-averaging steps over stacked node states.

    B: (N, n, n) information-matrix stack, b: (N, n) vector stack.
    indptr/indices: CSR closed neighborhoods (each includes the node itself).
    mask_rows/mask_bounds: concatenated selected-row indices per mask phase;
    step l uses phase l mod theta, theta = len(mask_bounds) - 1.

    Returns new (B, b) arrays; inputs are not modified.
    """
    B = np.array(B, dtype=float, order="C")
    b = np.array(b, dtype=float, order="C")
    n_nodes = B.shape[0]
    theta = len(mask_bounds) - 1
    for l in range(int(L)):
        z = l % theta
        rows = mask_rows[mask_bounds[z]:mask_bounds[z + 1]]
        B_next = B.copy()
        b_next = b.copy()
        for i in range(n_nodes):
            bi_rows = B[i, rows, :]
            vi_rows = b[i, rows]
            acc_B = np.zeros_like(bi_rows)
            acc_b = np.zeros_like(vi_rows)
            for j in indices[indptr[i]:indptr[i + 1]]:
                acc_B += B[j, rows, :] - bi_rows
                acc_b += b[j, rows] - vi_rows
            B_next[i, rows, :] = bi_rows + eps * acc_B
            b_next[i, rows] = vi_rows + eps * acc_b
        B, b = B_next, b_next
    return B, b

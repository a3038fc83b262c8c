"""Consensus kernel selection: compiled extension if available, else Python.

Both kernels implement the same loop with the same floating-point
operation order, so results are bit-identical. Set ICFPIE_KERNEL=python
to force the fallback (e.g. for benchmarking), or ICFPIE_KERNEL=compiled
to fail loudly when the extension is missing.
"""

import os

from ._consensus_py import run_masked_consensus as _py_impl

_forced = os.environ.get("ICFPIE_KERNEL", "").strip().lower()

if _forced == "python":
    run_masked_consensus = _py_impl
    KERNEL_BACKEND = "python"
else:
    try:
        from ._consensus_cy import run_masked_consensus as _cy_impl
        run_masked_consensus = _cy_impl
        KERNEL_BACKEND = "compiled"
    except ImportError:
        if _forced == "compiled":
            raise
        run_masked_consensus = _py_impl
        KERNEL_BACKEND = "python"


def kernel_backend() -> str:
    """Name of the kernel in use: 'compiled' or 'python'."""
    return KERNEL_BACKEND

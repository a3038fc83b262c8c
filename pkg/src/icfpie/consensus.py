"""Masked consensus averaging over per-node (B, b) information pairs.

Each node starts from B(0) = Omega_prior / N + delta_Omega and
b(0) = q_prior / N + delta_q and repeatedly averages with its closed
neighborhood. At step l only the rows/entries selected by that step's
mask move; everything else is frozen. Broadcasting node j therefore
serializes |J| rows of B plus |J| entries of b, i.e. |J|*(n+1) scalars,
which the bandwidth ledger records.

The L-step loop is the hot path and runs through the selected kernel
(compiled extension or Python fallback, bit-identical); the single-step
function below is the reference semantics and also supports per-node
masks for experiments outside the synchronized-schedule assumption.
"""

import warnings
from dataclasses import dataclass

import numpy as np

from ._kernels import kernel_backend, run_masked_consensus
from .errors import ConfigurationError, ConsensusCycleWarning
from .info_filter import InformationState
from .network import BandwidthLedger, SensorNetwork
from .selection import EntrySelectionSchedule


@dataclass
class ConsensusState:
    """Stacked per-node consensus iterates: B (N, n, n) and b (N, n)."""

    B: np.ndarray
    b: np.ndarray

    @property
    def n_nodes(self) -> int:
        return self.B.shape[0]

    @property
    def n(self) -> int:
        return self.B.shape[1]

    def __getitem__(self, node: int):
        return self.B[node], self.b[node]

    @classmethod
    def from_pairs(cls, pairs) -> "ConsensusState":
        """Build from an ordered iterable of per-node (B_i, b_i) pairs."""
        mats, vecs = zip(*pairs)
        return cls(B=np.array(mats, dtype=float), b=np.array(vecs, dtype=float))


def init_consensus(prior: InformationState, delta_omega: np.ndarray,
                   delta_q: np.ndarray, n_nodes: int):
    """Per-node consensus initialization:
    B(0) = Omega_prior / N + delta_Omega, b(0) = q_prior / N + delta_q."""
    if n_nodes < 1:
        raise ConfigurationError(f"node count must be >= 1, got {n_nodes}")
    b0_mat = prior.omega / n_nodes + delta_omega
    b0_vec = prior.q / n_nodes + delta_q
    return b0_mat, b0_vec


def _mask_vectors(masks, n_nodes: int, n: int) -> np.ndarray:
    """Normalize mask input to an (N, n) 0/1 array of per-sender masks.

    A dict {node: mask} gives heterogeneous per-sender masks; any other
    input (length-n vector or n x n diagonal matrix) is shared by all.
    """
    def as_vector(m):
        m = np.asarray(m, dtype=float)
        if m.ndim == 2 and m.shape == (n, n):
            m = np.diag(m)
        if m.shape != (n,):
            raise ConfigurationError(f"cannot interpret mask with shape {m.shape}")
        return m

    if isinstance(masks, dict):
        if set(masks) != set(range(n_nodes)):
            raise ConfigurationError("per-node masks must cover every node id")
        return np.array([as_vector(masks[i]) for i in range(n_nodes)])
    return np.tile(as_vector(masks), (n_nodes, 1))


def consensus_step(state: ConsensusState, net: SensorNetwork, masks,
                   eps: float) -> ConsensusState:
    """One synchronous averaging step, reading every node from the previous
    iterate. `masks` may be a single mask (applied by all senders) or a
    per-node stack; the sender's mask gates which rows it contributes.
    """
    if eps <= 0:
        raise ConfigurationError(f"consensus gain must be > 0, got {eps}")
    mvec = _mask_vectors(masks, state.n_nodes, state.n)
    B, b = state.B, state.b
    B_next = B.copy()
    b_next = b.copy()
    for i in range(state.n_nodes):
        acc_B = np.zeros_like(B[i])
        acc_b = np.zeros_like(b[i])
        touched = np.zeros(state.n, dtype=bool)
        for j in net.neighborhoods[i]:
            sel = mvec[j] > 0
            touched |= sel
            acc_B[sel, :] += B[j, sel, :] - B[i, sel, :]
            acc_b[sel] += b[j, sel] - b[i, sel]
        B_next[i, touched, :] = B[i, touched, :] + eps * acc_B[touched, :]
        b_next[i, touched] = b[i, touched] + eps * acc_b[touched]
    return ConsensusState(B=B_next, b=b_next)


def _csr_neighborhoods(net: SensorNetwork):
    indptr = np.zeros(net.n_nodes + 1, dtype=np.intp)
    for i, hood in enumerate(net.neighborhoods):
        indptr[i + 1] = indptr[i] + len(hood)
    indices = np.concatenate(net.neighborhoods).astype(np.intp)
    return indptr, indices


def run_consensus(state: ConsensusState, schedule: EntrySelectionSchedule, L: int,
                  net: SensorNetwork, eps: float, ledger: BandwidthLedger = None,
                  t: int = 0) -> ConsensusState:
    """Run L masked consensus steps under a synchronized schedule.

    Step l applies the schedule's mask for l mod theta at every node.
    Warns (and proceeds) when L is not a whole number of selection cycles.
    Broadcast sizes are recorded per node per step when a ledger is given.
    """
    if L < 1:
        raise ConfigurationError(f"consensus step count must be >= 1, got {L}")
    if eps <= 0:
        raise ConfigurationError(f"consensus gain must be > 0, got {eps}")
    if L % schedule.theta_bar != 0:
        warnings.warn(
            f"consensus ran {L} steps, not a multiple of the {schedule.theta_bar}-step "
            "selection cycle; posterior rows are mixed across cycle phases",
            ConsensusCycleWarning, stacklevel=2,
        )
    indptr, indices = _csr_neighborhoods(net)
    mask_rows = np.concatenate(schedule.rows).astype(np.intp)
    mask_bounds = np.zeros(schedule.theta_bar + 1, dtype=np.intp)
    for z in range(schedule.theta_bar):
        mask_bounds[z + 1] = mask_bounds[z] + schedule.rows[z].size
    B, b = run_masked_consensus(state.B, state.b, indptr, indices,
                                mask_rows, mask_bounds, L, eps)
    if ledger is not None:
        n = state.n
        for l in range(L):
            payload = schedule.rows_at(l).size * (n + 1)
            for node in range(state.n_nodes):
                ledger.record_broadcast(node, t, l, payload)
    return ConsensusState(B=B, b=b)


__all__ = [
    "ConsensusState",
    "init_consensus",
    "consensus_step",
    "run_consensus",
    "kernel_backend",
]

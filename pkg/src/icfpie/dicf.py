"""Per-timestep distributed and centralized filter steps.

A distributed step per node: local correction terms from its own
measurement (zero when the target is unsensed), consensus initialization,
L masked consensus steps with the whole network, posterior recovery
(Omega = N * B(L), estimate from the B(L) b(L) pair with the singular
policy), then an information-form prediction linearized at the node's own
posterior estimate. With the identity selection schedule this is exactly
the original full-exchange consensus filter; the centralized step fuses
every node's contribution at once and serves as the benchmark.
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .consensus import ConsensusState, init_consensus, run_consensus
from .info_filter import (
    InformationState,
    NoiseInformation,
    NumericsLog,
    centralized_correct,
    information_state,
    local_correction_terms,
    predict,
    to_state_estimate,
)
from .models import MeasurementModel, SystemModel, linearize
from .network import BandwidthLedger, SensorNetwork
from .selection import EntrySelectionSchedule


@dataclass
class NodeFilter:
    """One node's filter state carried between timesteps."""

    node_id: int
    prior: InformationState
    meas_model: MeasurementModel
    last_estimate: Optional[np.ndarray] = None


@dataclass
class StepOutput:
    """Results of one timestep across the network."""

    posteriors: list               # per-node InformationState
    estimates: np.ndarray          # (N, n) posterior state estimates
    prior_estimates: np.ndarray    # (N, n) estimates before correction
    centralized: Optional[InformationState] = None
    errors: Optional[np.ndarray] = None        # (N, n) truth - posterior estimate
    prior_errors: Optional[np.ndarray] = None  # (N, n) truth - prior estimate


def _linearized_contribution(node: NodeFilter, measurement, x_prior: np.ndarray,
                             v: np.ndarray):
    """(delta_Omega, delta_q) for one node; zeros when there is no measurement."""
    n = node.prior.n
    if measurement is None:
        return np.zeros((n, n)), np.zeros(n)
    c = linearize(node.meas_model, x_prior)
    # linearization offset; collapses to the raw measurement for linear h
    ybar = np.asarray(measurement, dtype=float) - node.meas_model.observe(x_prior) + c @ x_prior
    return local_correction_terms(c, v, ybar)


def dicf_step(nodes: list, net: SensorNetwork, schedule: EntrySelectionSchedule,
              L: int, eps: float, measurements: list, sys: SystemModel,
              n_nodes: int, ledger: Optional[BandwidthLedger] = None,
              noise: Optional[NoiseInformation] = None, t: int = 0,
              truth: Optional[np.ndarray] = None,
              log: Optional[NumericsLog] = None):
    """Advance every node one timestep; returns (updated nodes, StepOutput)."""
    if noise is None:
        noise = NoiseInformation.from_covariances(
            sys.process_cov, {nf.node_id: nf.meas_model.meas_cov for nf in nodes})
    prior_estimates = np.array([to_state_estimate(nf.prior, log) for nf in nodes])
    pairs = []
    for nf, y, x_prior in zip(nodes, measurements, prior_estimates):
        d_omega, d_q = _linearized_contribution(nf, y, x_prior, noise.v_per_node[nf.node_id])
        pairs.append(init_consensus(nf.prior, d_omega, d_q, n_nodes))
    state = run_consensus(ConsensusState.from_pairs(pairs), schedule, L, net,
                          eps, ledger=ledger, t=t)

    new_nodes = []
    posteriors = []
    estimates = np.zeros((len(nodes), nodes[0].prior.n))
    for k, nf in enumerate(nodes):
        b_mat, b_vec = state[k]
        posterior = information_state(n_nodes * b_mat, n_nodes * b_vec)
        # estimate from the consensus pair itself; the N factor cancels
        x_post = to_state_estimate(information_state(b_mat, b_vec), log)
        a = linearize(sys, x_post)
        next_prior = predict(posterior, a, noise.w, transition=sys.transition, log=log)
        new_nodes.append(NodeFilter(node_id=nf.node_id, prior=next_prior,
                                    meas_model=nf.meas_model, last_estimate=x_post))
        posteriors.append(posterior)
        estimates[k] = x_post

    errors = prior_errors = None
    if truth is not None:
        truth = np.asarray(truth, dtype=float)
        errors = truth - estimates
        prior_errors = truth - prior_estimates
    return new_nodes, StepOutput(posteriors=posteriors, estimates=estimates,
                                 prior_estimates=prior_estimates, errors=errors,
                                 prior_errors=prior_errors)


def ckf_step(central: InformationState, measurements: list, models: list,
             sys: SystemModel, noise: Optional[NoiseInformation] = None,
             log: Optional[NumericsLog] = None):
    """One centralized information-filter cycle over all sensors.

    Returns (posterior, next_prior); the posterior is the benchmark fused
    estimate for this timestep.
    """
    if noise is None:
        noise = NoiseInformation.from_covariances(
            sys.process_cov, {m.node_id: m.meas_cov for m in models})
    x_prior = to_state_estimate(central, log)
    contributions = []
    for y, model in zip(measurements, models):
        if y is None:
            continue
        c = linearize(model, x_prior)
        ybar = np.asarray(y, dtype=float) - model.observe(x_prior) + c @ x_prior
        contributions.append((c, noise.v_per_node[model.node_id], ybar))
    posterior = centralized_correct(central, contributions)
    x_post = to_state_estimate(posterior, log)
    a = linearize(sys, x_post)
    next_prior = predict(posterior, a, noise.w, transition=sys.transition, log=log)
    return posterior, next_prior

"""Information-form Kalman filter primitives and the centralized benchmark.

Estimates live in natural parameters: information matrix Omega = P^-1 and
information vector q = P^-1 x_hat. Correction is additive in (Omega, q);
prediction maps through the covariance form once per step.

Numerical policy (applied everywhere, logged via NumericsLog):
  * symmetrize Omega after every arithmetic update;
  * if the smallest eigenvalue of Omega falls below SINGULAR_EIG before an
    inversion, shift Omega by lam*I with lam = 1e-8 * (1 + |trace|/n),
    plus whatever clears a negative eigenvalue;
  * state extraction from a singular Omega returns the minimum-norm
    least-squares solution and flags the event.
"""

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
import scipy.linalg

from .errors import ConfigurationError, FilterNumericsError

SINGULAR_EIG = 1e-10
REG_SCALE = 1e-8


@dataclass
class NumericsLog:
    """Collects regularization and singular-solve events for diagnostics."""

    events: list = field(default_factory=list)

    def record(self, kind: str, context: str, **info):
        self.events.append({"kind": kind, "context": context, **info})

    def count(self, kind: Optional[str] = None) -> int:
        if kind is None:
            return len(self.events)
        return sum(1 for e in self.events if e["kind"] == kind)


def symmetrize(m: np.ndarray) -> np.ndarray:
    """(M + M^T)/2, suppressing floating-point asymmetry drift."""
    return (m + m.T) / 2.0


@dataclass(frozen=True)
class InformationState:
    """Gaussian estimate in information form: symmetric PSD Omega, vector q."""

    omega: np.ndarray
    q: np.ndarray

    @property
    def n(self) -> int:
        return self.q.shape[0]


def information_state(omega: np.ndarray, q: np.ndarray) -> InformationState:
    """Construct an InformationState, symmetrizing and checking shapes."""
    omega = symmetrize(np.asarray(omega, dtype=float))
    q = np.asarray(q, dtype=float)
    if omega.shape != (q.shape[0], q.shape[0]):
        raise ConfigurationError(
            f"information matrix {omega.shape} does not match vector length {q.shape}"
        )
    return InformationState(omega=omega, q=q)


@dataclass(frozen=True)
class NoiseInformation:
    """Inverted noise covariances: W = Q^-1 and per-node V^i = (R^i)^-1."""

    w: np.ndarray
    v_per_node: dict

    @classmethod
    def from_covariances(cls, q: np.ndarray, r_per_node: dict) -> "NoiseInformation":
        return cls(
            w=symmetrize(np.linalg.inv(np.asarray(q, dtype=float))),
            v_per_node={i: symmetrize(np.linalg.inv(np.asarray(r, dtype=float)))
                        for i, r in r_per_node.items()},
        )


def _min_eigenvalue(m: np.ndarray, context: str) -> float:
    if not np.all(np.isfinite(m)):
        raise FilterNumericsError(f"non-finite information matrix in {context}")
    try:
        return float(np.linalg.eigvalsh(m).min())
    except np.linalg.LinAlgError as exc:
        raise FilterNumericsError(f"eigenvalue computation failed in {context}: {exc}")


def ensure_invertible(omega: np.ndarray, log: Optional[NumericsLog] = None,
                      context: str = "") -> np.ndarray:
    """Apply the diagonal-shift regularization when Omega is near singular.

    The shift is 1e-8 * (1 + |trace|/n); slightly indefinite matrices (a
    partial selection cycle can leave the symmetrized posterior with a
    small negative eigenvalue) are additionally shifted past zero.
    """
    eig_min = _min_eigenvalue(omega, context or "ensure_invertible")
    if eig_min >= SINGULAR_EIG:
        return omega
    n = omega.shape[0]
    lam = REG_SCALE * (1.0 + abs(float(np.trace(omega))) / n) + max(0.0, -eig_min)
    if log is not None:
        log.record("regularize", context, eig_min=eig_min, lam=lam)
    return omega + lam * np.eye(n)


def inv_spd(m: np.ndarray, log: Optional[NumericsLog] = None, context: str = "") -> np.ndarray:
    """Inverse of a symmetric positive-definite matrix via Cholesky.

    Reports the (cheap, factor-based) condition estimate through `log` when
    it is large; raises FilterNumericsError if the factorization fails.
    """
    try:
        c, low = scipy.linalg.cho_factor(m, lower=True, check_finite=False)
    except (scipy.linalg.LinAlgError, ValueError) as exc:
        raise FilterNumericsError(f"matrix not positive definite in {context or 'inv_spd'}: {exc}")
    d = np.abs(np.diag(c))
    cond_est = float((d.max() / d.min()) ** 2)
    if log is not None and cond_est > 1e12:
        log.record("ill_conditioned", context, cond_estimate=cond_est)
    inv = scipy.linalg.cho_solve((c, low), np.eye(m.shape[0]), check_finite=False)
    return symmetrize(inv)


def local_correction_terms(c: np.ndarray, v: np.ndarray, y: np.ndarray):
    """Additive information contribution of one measurement.

    Returns (delta_omega, delta_q) = (C^T V C, C^T V y).
    """
    c = np.asarray(c, dtype=float)
    v = np.asarray(v, dtype=float)
    y = np.asarray(y, dtype=float)
    m = c.shape[0]
    if v.shape != (m, m) or y.shape != (m,):
        raise ConfigurationError(
            f"inconsistent correction dimensions: C {c.shape}, V {v.shape}, y {y.shape}"
        )
    ctv = c.T @ v
    return symmetrize(ctv @ c), ctv @ y


def centralized_correct(prior: InformationState, contributions) -> InformationState:
    """Fuse measurement contributions additively at a single center.

    `contributions` is an iterable of (C_i, V_i, ybar_i) triples; for
    linear observations ybar_i is just the raw measurement.
    """
    omega = prior.omega.copy()
    q = prior.q.copy()
    for c, v, ybar in contributions:
        d_omega, d_q = local_correction_terms(c, v, ybar)
        omega = omega + d_omega
        q = q + d_q
    return information_state(omega, q)


def predict(post: InformationState, a: np.ndarray, w: np.ndarray,
            transition: Optional[Callable[[np.ndarray], np.ndarray]] = None,
            log: Optional[NumericsLog] = None) -> InformationState:
    """Time update in information form.

    Omega+ = (A Omega^-1 A^T + W^-1)^-1 and q+ = Omega+ f(x_hat), where
    x_hat = Omega^-1 q. `transition` defaults to the linear map x -> A x.
    """
    a = np.asarray(a, dtype=float)
    omega = ensure_invertible(symmetrize(post.omega), log, "predict")
    p = inv_spd(omega, log, "predict: invert posterior")
    x_hat = p @ post.q
    p_next = symmetrize(a @ p @ a.T) + inv_spd(np.asarray(w, dtype=float), log, "predict: invert W")
    omega_next = inv_spd(p_next, log, "predict: invert predicted covariance")
    x_next = a @ x_hat if transition is None else np.asarray(transition(x_hat), dtype=float)
    return information_state(omega_next, omega_next @ x_next)


def to_state_estimate(s: InformationState, log: Optional[NumericsLog] = None) -> np.ndarray:
    """State estimate Omega^-1 q; minimum-norm solution when Omega is singular."""
    omega = symmetrize(s.omega)
    eig_min = _min_eigenvalue(omega, "to_state_estimate")
    if eig_min < SINGULAR_EIG:
        if log is not None:
            log.record("singular_solve", "to_state_estimate", eig_min=eig_min)
        x, *_ = np.linalg.lstsq(omega, s.q, rcond=None)
        return x
    try:
        c, low = scipy.linalg.cho_factor(omega, lower=True, check_finite=False)
    except (scipy.linalg.LinAlgError, ValueError):
        if log is not None:
            log.record("singular_solve", "to_state_estimate", eig_min=eig_min)
        x, *_ = np.linalg.lstsq(omega, s.q, rcond=None)
        return x
    return scipy.linalg.cho_solve((c, low), s.q, check_finite=False)

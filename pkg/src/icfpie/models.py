"""State-space system/measurement models and truth-trajectory generation.

The tracking scenario is a 2-D constant-velocity target: state
[x, y, vx, vy] in meters and meters/second. Filters see a linear system
(x' = A x + w) while the simulated target's speed fluctuates directly,
so the truth model and the filter's process noise are deliberately
separate objects.
"""

import warnings
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .errors import ConfigurationError, DegenerateHeadingWarning, FilterNumericsError


def constant_velocity_matrix(dt: float, n: int = 4) -> np.ndarray:
    """Transition matrix of the 2-D constant-velocity model for step dt."""
    a = np.eye(n)
    half = n // 2
    for i in range(half):
        a[i, half + i] = dt
    return a


def position_measurement_matrix(n: int = 4) -> np.ndarray:
    """2 x n matrix reading out the planar position components."""
    c = np.zeros((2, n))
    c[0, 0] = 1.0
    c[1, 1] = 1.0
    return c


def _check_spd(m: np.ndarray, name: str) -> np.ndarray:
    m = np.asarray(m, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ConfigurationError(f"{name} must be square, got shape {m.shape}")
    if not np.allclose(m, m.T, atol=1e-12):
        raise ConfigurationError(f"{name} must be symmetric")
    if np.linalg.eigvalsh(m).min() <= 0:
        raise ConfigurationError(f"{name} must be positive definite")
    return m


@dataclass(frozen=True)
class SystemModel:
    """Process model: transition function, its Jacobian, and noise covariance.

    For linear time-invariant systems `linear_matrix` holds the constant
    transition matrix and the Jacobian ignores its argument.
    """

    transition: Callable[[np.ndarray], np.ndarray]
    jacobian: Callable[[np.ndarray], np.ndarray]
    process_cov: np.ndarray
    linear_matrix: Optional[np.ndarray] = None

    @classmethod
    def lti(cls, a: np.ndarray, q: np.ndarray, require_invertible: bool = True) -> "SystemModel":
        a = np.asarray(a, dtype=float)
        q = _check_spd(q, "process_cov")
        if a.shape != q.shape:
            raise ConfigurationError(f"A {a.shape} and Q {q.shape} dimensions differ")
        if require_invertible:
            sv = np.linalg.svd(a, compute_uv=False)
            if sv.min() <= sv.max() * np.finfo(float).eps * a.shape[0]:
                raise ConfigurationError("linear system matrix is singular")
        return cls(
            transition=lambda x, _a=a: _a @ x,
            jacobian=lambda x, _a=a: _a,
            process_cov=q,
            linear_matrix=a,
        )

    @property
    def n(self) -> int:
        return self.process_cov.shape[0]


@dataclass(frozen=True)
class MeasurementModel:
    """One node's sensor: observation function, Jacobian, noise covariance."""

    node_id: int
    observe: Callable[[np.ndarray], np.ndarray]
    jacobian: Callable[[np.ndarray], np.ndarray]
    meas_cov: np.ndarray

    @classmethod
    def linear(cls, node_id: int, c: np.ndarray, r: np.ndarray) -> "MeasurementModel":
        c = np.asarray(c, dtype=float)
        r = _check_spd(r, "meas_cov")
        if r.shape[0] != c.shape[0]:
            raise ConfigurationError(
                f"measurement matrix rows {c.shape[0]} and R size {r.shape[0]} differ"
            )
        return cls(
            node_id=node_id,
            observe=lambda x, _c=c: _c @ x,
            jacobian=lambda x, _c=c: _c,
            meas_cov=r,
        )

    @property
    def m(self) -> int:
        return self.meas_cov.shape[0]


@dataclass(frozen=True)
class TruthModel:
    """Target motion: constant heading, speed with per-step Gaussian jitter."""

    initial_position: tuple[float, float]
    speed_range: tuple[float, float]
    heading_range: tuple[float, float]
    speed_variance: float
    dt: float

    def __post_init__(self):
        if self.speed_range[0] > self.speed_range[1]:
            raise ConfigurationError(f"speed range reversed: {self.speed_range}")
        if self.heading_range[0] > self.heading_range[1]:
            raise ConfigurationError(f"heading range reversed: {self.heading_range}")
        if self.speed_variance < 0:
            raise ConfigurationError("speed variance must be >= 0")
        if self.dt <= 0:
            raise ConfigurationError("dt must be > 0")

    def initial_state(self, rng: np.random.Generator) -> np.ndarray:
        """Draw [x0, y0, V0 cos(psi0), V0 sin(psi0)] with uniform V0, psi0."""
        v0 = rng.uniform(*self.speed_range)
        psi0 = rng.uniform(*self.heading_range)
        x0, y0 = self.initial_position
        return np.array([x0, y0, v0 * np.cos(psi0), v0 * np.sin(psi0)])


def propagate_truth(state: np.ndarray, model: TruthModel, rng: np.random.Generator) -> np.ndarray:
    """Advance the target one step: move with the current velocity, then
    perturb the speed and keep the heading.

    With zero speed the heading is undefined; the velocity is kept and a
    DegenerateHeadingWarning is issued.
    """
    state = np.asarray(state, dtype=float)
    if state.shape != (4,):
        raise ConfigurationError(f"truth state must have length 4, got shape {state.shape}")
    pos = state[:2] + model.dt * state[2:]
    vel = state[2:]
    speed = float(np.hypot(vel[0], vel[1]))
    if speed == 0.0:
        warnings.warn("zero-speed target state: heading undefined, velocity kept",
                      DegenerateHeadingWarning, stacklevel=2)
        new_vel = vel
    else:
        heading = np.arctan2(vel[1], vel[0])
        if model.speed_variance > 0:
            speed = speed + rng.normal(0.0, np.sqrt(model.speed_variance))
        new_vel = speed * np.array([np.cos(heading), np.sin(heading)])
    out = np.concatenate([pos, new_vel])
    if not np.all(np.isfinite(out)):
        raise FilterNumericsError("non-finite truth state after propagation")
    return out


def sample_measurement(state: np.ndarray, meas: MeasurementModel,
                       rng: np.random.Generator) -> np.ndarray:
    """Observation of `state` plus zero-mean Gaussian noise with cov meas_cov."""
    y = np.asarray(meas.observe(np.asarray(state, dtype=float)), dtype=float)
    if y.shape != (meas.m,):
        raise ConfigurationError(
            f"observation has shape {y.shape}, expected ({meas.m},) for node {meas.node_id}"
        )
    chol = np.linalg.cholesky(meas.meas_cov)
    return y + chol @ rng.standard_normal(meas.m)


def linearize(model, x_hat: np.ndarray) -> np.ndarray:
    """Jacobian of a system or measurement model evaluated at x_hat.

    For linear models this is the constant matrix regardless of x_hat.
    """
    x_hat = np.asarray(x_hat, dtype=float)
    if not np.all(np.isfinite(x_hat)):
        raise FilterNumericsError("cannot linearize at a non-finite point")
    jac = np.asarray(model.jacobian(x_hat), dtype=float)
    if not np.all(np.isfinite(jac)):
        raise FilterNumericsError("Jacobian has non-finite entries")
    return jac

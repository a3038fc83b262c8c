"""Scenario construction, Monte-Carlo execution, L-sweeps, and CSV output.

The default configuration reproduces the reference tracking study: 10
nodes placed uniformly in a 600 m square with 300 m communication and
sensing ranges, a constant-velocity target starting at (400, 0) m heading
north-to-northwest at 10-15 m/s with per-step speed jitter, position-only
sensors with R = diag([25, 25]), filter process noise Q = diag([10, 10,
1, 1]), zero initial information, 0.1 s steps for 30 s, and 100
Monte-Carlo runs.

All randomness of run k is drawn from seed (master_seed + k) inside
build_scenario, so every algorithm in a run, and every L in a sweep,
consumes identical truth and measurement sequences.
"""

import ast
import dataclasses
import json
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import __version__
from .consensus import kernel_backend
from .dicf import NodeFilter, ckf_step, dicf_step
from .errors import ConfigurationError, FilterNumericsError
from .info_filter import (
    InformationState,
    NoiseInformation,
    NumericsLog,
    information_state,
    to_state_estimate,
)
from .models import (
    MeasurementModel,
    SystemModel,
    TruthModel,
    constant_velocity_matrix,
    position_measurement_matrix,
    propagate_truth,
    sample_measurement,
)
from .network import BandwidthLedger, SensorNetwork, consensus_gain, random_geometric
from .selection import EntrySelectionSchedule, build_schedule, default_schedule

STATE_DIM = 4


@dataclass(frozen=True)
class ScenarioConfig:
    """Every scenario parameter, with the reference-study defaults."""

    n_nodes: int = 10
    comm_range: float = 300.0
    sensing_range: float = 300.0
    region: tuple = (0.0, 600.0, 0.0, 600.0)
    dt: float = 0.1
    horizon: float = 30.0
    q_diag: tuple = (10.0, 10.0, 1.0, 1.0)
    r_diag: tuple = (25.0, 25.0)
    target_initial_position: tuple = (400.0, 0.0)
    speed_range: tuple = (10.0, 15.0)
    heading_range: tuple = (math.pi / 2, 3 * math.pi / 4)
    speed_variance: float = 0.25
    initial_estimate: tuple = (0.0, 0.0, 0.0, 0.0)
    selection: object = "case1"      # "case1" | "case2" | "identity" | nested 1-based lists
    L: int = 12
    eps: Optional[float] = None      # None -> 1 / (max degree + 1)
    seed: int = 0
    mc_runs: int = 100
    truth_noise: str = "speed"       # "speed" | "process"
    error_metric: str = "full"       # "full" | "position"
    max_placement_retries: int = 200

    def __post_init__(self):
        if self.n_nodes < 2:
            raise ConfigurationError("need at least 2 sensor nodes")
        if self.dt <= 0 or self.horizon <= 0:
            raise ConfigurationError("dt and horizon must be positive")
        if self.mc_runs < 1:
            raise ConfigurationError("mc_runs must be >= 1")
        if self.L < 1:
            raise ConfigurationError("consensus step count L must be >= 1")
        if self.truth_noise not in ("speed", "process"):
            raise ConfigurationError(f"unknown truth_noise mode {self.truth_noise!r}")
        if self.error_metric not in ("full", "position"):
            raise ConfigurationError(f"unknown error_metric {self.error_metric!r}")

    @property
    def n_steps(self) -> int:
        return int(round(self.horizon / self.dt))

    def system_matrix(self) -> np.ndarray:
        return constant_velocity_matrix(self.dt, STATE_DIM)

    def schedule(self) -> EntrySelectionSchedule:
        return schedule_from_selection(self.selection)

    def case_label(self) -> str:
        if self.selection == "case1":
            return "1"
        if self.selection == "case2":
            return "2"
        if self.selection == "identity":
            return "identity"
        return "custom"

    def to_dict(self) -> dict:
        d = dataclasses.asdict(self)
        for key, value in d.items():
            if isinstance(value, tuple):
                d[key] = list(value)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "ScenarioConfig":
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = set(d) - known
        if unknown:
            raise ConfigurationError(f"unknown config keys: {sorted(unknown)}")
        kwargs = dict(d)
        for key in ("region", "q_diag", "r_diag", "target_initial_position",
                    "speed_range", "heading_range", "initial_estimate"):
            if key in kwargs and isinstance(kwargs[key], list):
                kwargs[key] = tuple(kwargs[key])
        return cls(**kwargs)


def schedule_from_selection(selection) -> EntrySelectionSchedule:
    """Map a config `selection` value to a schedule: a named case or
    explicit nested 1-based subsets like [[1, 3], [2, 4]]."""
    if isinstance(selection, str):
        return default_schedule(STATE_DIM, selection)
    return build_schedule(STATE_DIM, selection)


@dataclass(frozen=True)
class AlgorithmSpec:
    """One estimator to run: name, reporting case label, and its schedule."""

    name: str                                    # "icfpie" | "icf" | "ckf"
    case: str                                    # "1" | "2" | "identity" | "custom" | "-"
    schedule: Optional[EntrySelectionSchedule] = None

    @property
    def label(self) -> str:
        return self.name if self.name == "ckf" else f"{self.name}[{self.case}]"

    @property
    def uses_consensus(self) -> bool:
        return self.name != "ckf"


def make_algorithms(cfg: ScenarioConfig, include=("ckf", "icf", "icfpie")) -> list:
    algs = []
    for name in include:
        if name == "ckf":
            algs.append(AlgorithmSpec("ckf", "-"))
        elif name == "icf":
            algs.append(AlgorithmSpec("icf", "identity", default_schedule(STATE_DIM, "identity")))
        elif name == "icfpie":
            algs.append(AlgorithmSpec("icfpie", cfg.case_label(), cfg.schedule()))
        else:
            raise ConfigurationError(f"unknown algorithm {name!r}")
    return algs


@dataclass
class Scenario:
    """A fully materialized run: network, models, and pregenerated data."""

    cfg: ScenarioConfig
    seed: int
    net: SensorNetwork
    truth_model: TruthModel
    sys: SystemModel
    meas_models: list
    noise: NoiseInformation
    eps: float
    truth: np.ndarray         # (T, 4)
    measurements: np.ndarray  # (T, N, 2)
    sensed: np.ndarray        # (T, N) bool

    def initial_state(self) -> InformationState:
        omega0 = np.zeros((STATE_DIM, STATE_DIM))
        return information_state(omega0, omega0 @ np.asarray(self.cfg.initial_estimate))

    def initial_nodes(self) -> list:
        return [NodeFilter(node_id=i, prior=self.initial_state(), meas_model=m)
                for i, m in enumerate(self.meas_models)]

    def measurements_at(self, t: int) -> list:
        """Per-node measurement list for step t, None where unsensed."""
        return [self.measurements[t, i] if self.sensed[t, i] else None
                for i in range(self.net.n_nodes)]


def build_scenario(cfg: ScenarioConfig, seed: int) -> Scenario:
    """Deterministically materialize network, truth, and measurements."""
    rng = np.random.default_rng(seed)
    net = random_geometric(cfg.n_nodes, cfg.region, cfg.comm_range, rng,
                           max_retries=cfg.max_placement_retries,
                           sensing_range=cfg.sensing_range)
    truth_model = TruthModel(
        initial_position=tuple(cfg.target_initial_position),
        speed_range=tuple(cfg.speed_range),
        heading_range=tuple(cfg.heading_range),
        speed_variance=cfg.speed_variance,
        dt=cfg.dt,
    )
    a = cfg.system_matrix()
    q = np.diag(cfg.q_diag)
    sys = SystemModel.lti(a, q)
    r = np.diag(cfg.r_diag)
    c = position_measurement_matrix(STATE_DIM)
    meas_models = [MeasurementModel.linear(i, c, r) for i in range(cfg.n_nodes)]
    noise = NoiseInformation.from_covariances(q, {i: r for i in range(cfg.n_nodes)})

    n_steps = cfg.n_steps
    truth = np.zeros((n_steps, STATE_DIM))
    truth[0] = truth_model.initial_state(rng)
    if cfg.truth_noise == "speed":
        for t in range(1, n_steps):
            truth[t] = propagate_truth(truth[t - 1], truth_model, rng)
    else:
        chol_q = np.linalg.cholesky(q)
        for t in range(1, n_steps):
            truth[t] = a @ truth[t - 1] + chol_q @ rng.standard_normal(STATE_DIM)

    measurements = np.zeros((n_steps, cfg.n_nodes, 2))
    for t in range(n_steps):
        for i, m in enumerate(meas_models):
            measurements[t, i] = sample_measurement(truth[t], m, rng)
    dist = np.linalg.norm(truth[:, None, :2] - net.positions[None, :, :], axis=2)
    sensed = dist <= cfg.sensing_range

    eps = consensus_gain(net) if cfg.eps is None else float(cfg.eps)
    return Scenario(cfg=cfg, seed=seed, net=net, truth_model=truth_model, sys=sys,
                    meas_models=meas_models, noise=noise, eps=eps, truth=truth,
                    measurements=measurements, sensed=sensed)


@dataclass
class RunMetrics:
    """Per-timestep metrics of one run (or a Monte-Carlo mean)."""

    t: np.ndarray
    series: dict              # label -> (T,) node-averaged error norm
    final: dict               # label -> float
    settling: dict            # label -> float | None
    bandwidth: dict           # label -> total scalars broadcast
    diag: Optional[dict] = None


def settling_time(t: np.ndarray, series: np.ndarray, dt: float,
                  band: float = 0.05) -> Optional[float]:
    """First time after which the series stays within `band` of its
    final-1-second average; None when it never settles."""
    k = max(1, int(round(1.0 / dt)))
    final_avg = float(series[-k:].mean())
    tol = band * abs(final_avg)
    inside = np.abs(series - final_avg) <= tol
    # last index before which some sample is outside the band
    outside = np.flatnonzero(~inside)
    if outside.size == 0:
        return float(t[0])
    first = outside[-1] + 1
    if first >= len(series):
        return None
    return float(t[first])


def _error_norm(err: np.ndarray, metric: str) -> np.ndarray:
    """Row-wise error norms; `err` is (..., 4)."""
    if metric == "position":
        err = err[..., :2]
    return np.linalg.norm(err, axis=-1)


def run_once(scenario: Scenario, L: int, algorithms: Optional[list] = None,
             diagnostics: bool = False) -> RunMetrics:
    """Simulate the full horizon once, stepping every algorithm on the
    same truth and measurement sequences."""
    cfg = scenario.cfg
    if algorithms is None:
        algorithms = make_algorithms(cfg)
    n_steps = cfg.n_steps
    n_nodes = scenario.net.n_nodes
    t_axis = np.array([round((k + 1) * cfg.dt, 10) for k in range(n_steps)])

    series = {a.label: np.zeros(n_steps) for a in algorithms}
    ledgers = {a.label: BandwidthLedger() for a in algorithms if a.uses_consensus}
    logs = {a.label: NumericsLog() for a in algorithms}
    node_errors = {a.label: np.zeros((n_steps, n_nodes))
                   for a in algorithms if a.uses_consensus}
    node_prior_errors = {a.label: np.zeros((n_steps, n_nodes))
                         for a in algorithms if a.uses_consensus} if diagnostics else {}
    eig_min = {a.label: np.zeros((n_steps, n_nodes))
               for a in algorithms if a.uses_consensus} if diagnostics else {}
    eig_max = {a.label: np.zeros((n_steps, n_nodes))
               for a in algorithms if a.uses_consensus} if diagnostics else {}
    reg_events = {a.label: np.zeros(n_steps, dtype=int) for a in algorithms}

    nodes = {a.label: scenario.initial_nodes() for a in algorithms if a.uses_consensus}
    central = {a.label: scenario.initial_state() for a in algorithms if not a.uses_consensus}

    for t in range(n_steps):
        meas = scenario.measurements_at(t)
        truth_t = scenario.truth[t]
        for a in algorithms:
            log = logs[a.label]
            before = log.count("regularize")
            if a.uses_consensus:
                nodes[a.label], out = dicf_step(
                    nodes[a.label], scenario.net, a.schedule, L, scenario.eps,
                    meas, scenario.sys, n_nodes, ledger=ledgers[a.label],
                    noise=scenario.noise, t=t, truth=truth_t, log=log)
                errs = _error_norm(out.errors, cfg.error_metric)
                series[a.label][t] = errs.mean()
                node_errors[a.label][t] = errs
                if diagnostics:
                    node_prior_errors[a.label][t] = _error_norm(out.prior_errors,
                                                                cfg.error_metric)
                    for k, post in enumerate(out.posteriors):
                        ev = np.linalg.eigvalsh(post.omega)
                        eig_min[a.label][t, k] = ev[0]
                        eig_max[a.label][t, k] = ev[-1]
            else:
                posterior, central[a.label] = ckf_step(
                    central[a.label], meas, scenario.meas_models, scenario.sys,
                    noise=scenario.noise, log=log)
                x_hat = to_state_estimate(posterior, log)
                series[a.label][t] = _error_norm(truth_t - x_hat, cfg.error_metric)
            reg_events[a.label][t] = log.count("regularize") - before

    final = {label: float(s[-1]) for label, s in series.items()}
    settling = {label: settling_time(t_axis, s, cfg.dt) for label, s in series.items()}
    bandwidth = {a.label: (ledgers[a.label].total_scalars() if a.uses_consensus else 0)
                 for a in algorithms}
    diag = None
    if diagnostics:
        diag = {
            "node_errors": node_errors,
            "node_prior_errors": node_prior_errors,
            "eig_min": eig_min,
            "eig_max": eig_max,
            "reg_events": reg_events,
            "logs": logs,
        }
    return RunMetrics(t=t_axis, series=series, final=final, settling=settling,
                      bandwidth=bandwidth, diag=diag)


@dataclass
class MonteCarloResult:
    """Across-run aggregation of RunMetrics."""

    t: np.ndarray
    L: int
    mean_series: dict
    std_series: dict
    final_mean: dict
    final_std: dict
    final_min: dict
    final_max: dict
    bandwidth: dict
    settling: dict            # settling time of the mean series per label
    n_runs: int
    failures: int
    failed_seeds: list
    run_diags: Optional[list] = None


def _run_summary(metrics: RunMetrics, cfg: ScenarioConfig) -> dict:
    """Compact per-run diagnostics used by the stability/boundedness checks."""
    n_last = max(1, int(round(10.0 / cfg.dt)))
    transient = int(round(2.0 / cfg.dt))
    out = {}
    for label, s in metrics.series.items():
        entry = {"finite": bool(np.isfinite(s).all())}
        if metrics.diag and label in metrics.diag["node_errors"]:
            ne = metrics.diag["node_errors"][label]
            entry["finite"] = entry["finite"] and bool(np.isfinite(ne).all())
            entry["last10s_mse_max_node"] = float((ne[-n_last:] ** 2).mean(axis=0).max())
            entry["eig_min_after_transient"] = float(metrics.diag["eig_min"][label][transient:].min())
            entry["eig_max_after_transient"] = float(metrics.diag["eig_max"][label][transient:].max())
        else:
            entry["last10s_mse_max_node"] = float((s[-n_last:] ** 2).mean())
        entry["reg_events_after_transient"] = int(metrics.diag["reg_events"][label][transient:].sum()) \
            if metrics.diag else None
        out[label] = entry
    return out


def _mc_single_run(args) -> dict:
    cfg, L, include, diagnostics, seed = args
    scenario = build_scenario(cfg, seed)
    algorithms = make_algorithms(cfg, include)
    try:
        metrics = run_once(scenario, L, algorithms, diagnostics=diagnostics)
    except (FilterNumericsError, np.linalg.LinAlgError) as exc:
        return {"seed": seed, "failed": str(exc)}
    out = {
        "seed": seed,
        "failed": None,
        "series": metrics.series,
        "final": metrics.final,
        "bandwidth": metrics.bandwidth,
        "t": metrics.t,
    }
    if diagnostics:
        out["summary"] = _run_summary(metrics, cfg)
    return out


def _execute(fn, arglist, jobs: int):
    if jobs <= 1 or len(arglist) <= 1:
        return [fn(a) for a in arglist]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, arglist))


def run_monte_carlo(cfg: ScenarioConfig, L: int, include=("ckf", "icf", "icfpie"),
                    diagnostics: bool = False, jobs: int = 1) -> MonteCarloResult:
    """Average run_once over cfg.mc_runs runs with seeds master+k.

    Failed runs are excluded and counted; more than 5% failures raises.
    """
    arglist = [(cfg, L, tuple(include), diagnostics, cfg.seed + k)
               for k in range(cfg.mc_runs)]
    results = _execute(_mc_single_run, arglist, jobs)
    good = [r for r in results if r["failed"] is None]
    failed = [r for r in results if r["failed"] is not None]
    if len(failed) > 0.05 * cfg.mc_runs:
        raise FilterNumericsError(
            f"{len(failed)}/{cfg.mc_runs} Monte-Carlo runs failed numerically "
            f"(seeds {[r['seed'] for r in failed]})"
        )
    if not good:
        raise FilterNumericsError("all Monte-Carlo runs failed")

    labels = list(good[0]["series"].keys())
    t_axis = good[0]["t"]
    stacked = {lab: np.array([r["series"][lab] for r in good]) for lab in labels}
    finals = {lab: np.array([r["final"][lab] for r in good]) for lab in labels}
    mean_series = {lab: stacked[lab].mean(axis=0) for lab in labels}
    return MonteCarloResult(
        t=t_axis,
        L=L,
        mean_series=mean_series,
        std_series={lab: stacked[lab].std(axis=0) for lab in labels},
        final_mean={lab: float(finals[lab].mean()) for lab in labels},
        final_std={lab: float(finals[lab].std()) for lab in labels},
        final_min={lab: float(finals[lab].min()) for lab in labels},
        final_max={lab: float(finals[lab].max()) for lab in labels},
        bandwidth=good[0]["bandwidth"],
        settling={lab: settling_time(t_axis, mean_series[lab], cfg.dt)
                  for lab in labels},
        n_runs=len(good),
        failures=len(failed),
        failed_seeds=[r["seed"] for r in failed],
        run_diags=[r["summary"] for r in good] if diagnostics else None,
    )


@dataclass
class SweepResult:
    """Final error and bandwidth per (L, algorithm, case)."""

    rows: list  # dicts with keys L, alg, case, final_error, total_scalars
    n_runs: int
    failures: int

    def final_error(self, L: int, label: str) -> float:
        for row in self.rows:
            if row["L"] == L and row["label"] == label:
                return row["final_error"]
        raise KeyError(f"no sweep row for L={L}, label={label}")


def _sweep_single_run(args) -> dict:
    cfg, L_values, seed = args
    scenario = build_scenario(cfg, seed)
    case1 = dataclasses.replace(cfg, selection="case1")
    case2 = dataclasses.replace(cfg, selection="case2")
    algs = {
        "icfpie[1]": make_algorithms(case1, ["icfpie"])[0],
        "icfpie[2]": make_algorithms(case2, ["icfpie"])[0],
        "icf[identity]": make_algorithms(cfg, ["icf"])[0],
    }
    out = {"seed": seed, "failed": None, "finals": {}, "bandwidth": {}}
    try:
        ckf_metrics = run_once(scenario, 1, [make_algorithms(cfg, ["ckf"])[0]])
        out["finals"]["ckf"] = {lv: ckf_metrics.final["ckf"] for lv in L_values}
        out["bandwidth"]["ckf"] = {lv: 0 for lv in L_values}
        for label, alg in algs.items():
            out["finals"][label] = {}
            out["bandwidth"][label] = {}
            for lv in L_values:
                metrics = run_once(scenario, lv, [alg])
                out["finals"][label][lv] = metrics.final[label]
                out["bandwidth"][label][lv] = metrics.bandwidth[label]
    except (FilterNumericsError, np.linalg.LinAlgError) as exc:
        return {"seed": seed, "failed": str(exc)}
    return out


def sweep_consensus_steps(cfg: ScenarioConfig, L_values, jobs: int = 1) -> SweepResult:
    """Monte-Carlo-averaged final error over a grid of consensus step
    counts, for both partial-exchange cases, full exchange, and the
    centralized benchmark."""
    L_values = [int(v) for v in L_values]
    if not L_values:
        raise ConfigurationError("sweep needs at least one L value")
    arglist = [(cfg, tuple(L_values), cfg.seed + k) for k in range(cfg.mc_runs)]
    results = _execute(_sweep_single_run, arglist, jobs)
    good = [r for r in results if r["failed"] is None]
    failed = [r for r in results if r["failed"] is not None]
    if len(failed) > 0.05 * cfg.mc_runs:
        raise FilterNumericsError(
            f"{len(failed)}/{cfg.mc_runs} sweep runs failed numerically"
        )
    if not good:
        raise FilterNumericsError("all sweep runs failed")

    label_case = [("icfpie[1]", "icfpie", "1"), ("icfpie[2]", "icfpie", "2"),
                  ("icf[identity]", "icf", "identity"), ("ckf", "ckf", "-")]
    rows = []
    for lv in L_values:
        for label, alg, case in label_case:
            finals = np.array([r["finals"][label][lv] for r in good])
            rows.append({
                "L": lv,
                "alg": alg,
                "case": case,
                "label": label,
                "final_error": float(finals.mean()),
                "total_scalars": int(good[0]["bandwidth"][label][lv]),
            })
    return SweepResult(rows=rows, n_runs=len(good), failures=len(failed))


def _fmt(x) -> str:
    return repr(float(x))


def emit_outputs(result, out_dir, cfg: ScenarioConfig, extra_metadata: Optional[dict] = None):
    """Write CSV outputs plus a metadata file that fully reproduces them.

    MonteCarloResult -> timeseries.csv; SweepResult -> sweep.csv. Returns
    the list of written paths.
    """
    os.makedirs(out_dir, exist_ok=True)
    written = []
    metadata = {
        "config": cfg.to_dict(),
        "code_version": __version__,
        "kernel_backend": kernel_backend(),
    }
    if extra_metadata:
        metadata.update(extra_metadata)

    if isinstance(result, MonteCarloResult):
        path = os.path.join(out_dir, "timeseries.csv")
        with open(path, "w") as fh:
            fh.write("t,alg,case,L,avg_error_norm\n")
            for label in result.mean_series:
                alg, case = _split_label(label)
                for ti, v in zip(result.t, result.mean_series[label]):
                    fh.write(f"{_fmt(ti)},{alg},{case},{result.L},{_fmt(v)}\n")
        written.append(path)
        metadata["mode"] = "timeseries"
        metadata["L"] = result.L
        metadata["n_runs"] = result.n_runs
        metadata["failures"] = result.failures
    elif isinstance(result, SweepResult):
        path = os.path.join(out_dir, "sweep.csv")
        with open(path, "w") as fh:
            fh.write("L,alg,case,final_error,total_scalars\n")
            for row in result.rows:
                fh.write(f"{row['L']},{row['alg']},{row['case']},"
                         f"{_fmt(row['final_error'])},{row['total_scalars']}\n")
        written.append(path)
        metadata["mode"] = "sweep"
        metadata["L_values"] = sorted({row["L"] for row in result.rows})
        metadata["n_runs"] = result.n_runs
        metadata["failures"] = result.failures
    else:
        raise ConfigurationError(f"cannot emit outputs for {type(result).__name__}")

    meta_path = os.path.join(out_dir, "metadata.json")
    with open(meta_path, "w") as fh:
        json.dump(metadata, fh, indent=2, sort_keys=True)
        fh.write("\n")
    written.append(meta_path)
    return written


def _split_label(label: str):
    if label == "ckf":
        return "ckf", "-"
    name, case = label.rstrip("]").split("[")
    return name, case


def load_config(path) -> tuple:
    """Read a config file: either flat key=value lines (values parsed as
    Python literals when possible) or a metadata JSON from emit_outputs.

    Returns (ScenarioConfig, extra) where extra holds run options the
    config may carry (mode, L_values).
    """
    with open(path) as fh:
        text = fh.read()
    stripped = text.lstrip()
    if stripped.startswith("{"):
        meta = json.loads(text)
        cfg = ScenarioConfig.from_dict(meta.get("config", {}))
        extra = {k: meta[k] for k in ("mode", "L", "L_values") if k in meta}
        return cfg, extra

    values = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigurationError(f"{path}:{lineno}: expected key = value, got {raw!r}")
        key, _, val = line.partition("=")
        key = key.strip()
        val = val.strip()
        try:
            values[key] = ast.literal_eval(val)
        except (ValueError, SyntaxError):
            values[key] = val
    aliases = {"runs": "mc_runs", "consensus_steps": "L", "case": "selection"}
    values = {aliases.get(k, k): v for k, v in values.items()}
    if "selection" in values and values["selection"] in (1, 2):
        values["selection"] = f"case{values['selection']}"
    return ScenarioConfig.from_dict(values), {}

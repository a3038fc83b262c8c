import dataclasses
import json

import numpy as np
import pytest

from icfpie.errors import ConfigurationError
from icfpie.harness import (
    ScenarioConfig,
    build_scenario,
    emit_outputs,
    load_config,
    make_algorithms,
    run_monte_carlo,
    run_once,
    settling_time,
    sweep_consensus_steps,
)

FAST = dict(n_nodes=6, horizon=2.0, mc_runs=2, seed=3)


class TestBuildScenario:
    def test_deterministic_for_config_and_seed(self):
        cfg = ScenarioConfig(**FAST)
        s1 = build_scenario(cfg, 1)
        s2 = build_scenario(cfg, 1)
        assert np.array_equal(s1.net.positions, s2.net.positions)
        assert np.array_equal(s1.truth, s2.truth)
        assert np.array_equal(s1.measurements, s2.measurements)
        assert np.array_equal(s1.sensed, s2.sensed)

    def test_two_nodes_in_tiny_region_connect(self):
        cfg = ScenarioConfig(n_nodes=2, region=(0.0, 50.0, 0.0, 50.0), mc_runs=1)
        scenario = build_scenario(cfg, 0)
        assert scenario.net.adjacency[0, 1]

    def test_initial_target_state_in_configured_ranges(self):
        cfg = ScenarioConfig(**FAST)
        for seed in range(5):
            s = build_scenario(cfg, seed)
            x0 = s.truth[0]
            assert x0[0] == 400.0 and x0[1] == 0.0
            speed = np.hypot(x0[2], x0[3])
            heading = np.arctan2(x0[3], x0[2])
            assert 10.0 <= speed <= 15.0
            assert np.pi / 2 <= heading <= 3 * np.pi / 4

    def test_truth_driven_by_process_noise_mode(self):
        cfg = dataclasses.replace(ScenarioConfig(**FAST), truth_noise="process")
        s = build_scenario(cfg, 1)
        assert np.all(np.isfinite(s.truth))

    def test_consensus_gain_override(self):
        cfg = dataclasses.replace(ScenarioConfig(**FAST), eps=0.05)
        assert build_scenario(cfg, 1).eps == 0.05
        default = ScenarioConfig(**FAST)
        s = build_scenario(default, 1)
        assert s.eps == pytest.approx(1.0 / (s.net.max_degree() + 1))

    def test_step_count(self):
        assert ScenarioConfig().n_steps == 300
        assert ScenarioConfig(**FAST).n_steps == 20


class TestRunOnce:
    def test_benchmark_error_shrinks_from_start(self):
        cfg = ScenarioConfig(seed=5, mc_runs=1)
        scenario = build_scenario(cfg, 5)
        metrics = run_once(scenario, 1, make_algorithms(cfg, ["ckf"]))
        s = metrics.series["ckf"]
        # compare the settled tail against the cold-start error
        assert s[-10:].mean() < 0.3 * s[0]

    def test_identity_partial_exchange_equals_full_exchange_series(self):
        cfg = dataclasses.replace(ScenarioConfig(**FAST), selection="identity")
        scenario = build_scenario(cfg, 2)
        metrics = run_once(scenario, 4)
        assert np.array_equal(metrics.series["icfpie[identity]"],
                              metrics.series["icf[identity]"])

    def test_reference_consensus_depths_complete(self):
        cfg = ScenarioConfig(**FAST)
        scenario = build_scenario(cfg, 2)
        for L in (4, 12):
            metrics = run_once(scenario, L)
            for label, series in metrics.series.items():
                assert np.all(np.isfinite(series)), label

    def test_position_only_error_metric(self):
        cfg = dataclasses.replace(ScenarioConfig(**FAST), error_metric="position")
        scenario = build_scenario(cfg, 2)
        pos_metrics = run_once(scenario, 4, make_algorithms(cfg, ["ckf"]))
        full_cfg = ScenarioConfig(**FAST)
        full_metrics = run_once(build_scenario(full_cfg, 2), 4,
                                make_algorithms(full_cfg, ["ckf"]))
        # position norm is a lower bound on the full-state norm
        assert np.all(pos_metrics.series["ckf"] <= full_metrics.series["ckf"] + 1e-12)

    def test_bandwidth_totals_scale_with_selected_entries(self):
        cfg = ScenarioConfig(**FAST)
        scenario = build_scenario(cfg, 2)
        metrics = run_once(scenario, 4)
        ident = metrics.bandwidth["icf[identity]"]
        assert metrics.bandwidth["icfpie[1]"] * 2 == ident
        assert metrics.bandwidth["ckf"] == 0
        n_steps, L, n_nodes = cfg.n_steps, 4, cfg.n_nodes
        assert ident == n_steps * L * n_nodes * (4 * 4 + 4)


class TestSettlingTime:
    def test_settles_at_known_index(self):
        t = np.arange(1, 11, dtype=float)
        series = np.array([10.0, 8.0, 5.0, 2.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0])
        assert settling_time(t, series, dt=1.0) == 5.0

    def test_unsettled_when_final_sample_is_outside(self):
        # final-1s window covers two samples; the last one leaves the band
        t = np.arange(1, 6, dtype=float) * 0.5
        series = np.array([1.0, 1.0, 1.0, 3.0, 1.0])
        assert settling_time(t, series, dt=0.5) is None

    def test_settled_from_start(self):
        t = np.arange(1, 6, dtype=float)
        series = np.ones(5)
        assert settling_time(t, series, dt=1.0) == 1.0


class TestMonteCarlo:
    def test_single_run_equals_run_once(self):
        cfg = dataclasses.replace(ScenarioConfig(**FAST), mc_runs=1)
        mc = run_monte_carlo(cfg, 4)
        scenario = build_scenario(cfg, cfg.seed)
        once = run_once(scenario, 4)
        for label in mc.mean_series:
            assert np.array_equal(mc.mean_series[label], once.series[label])

    def test_averaging_is_linear(self):
        cfg = dataclasses.replace(ScenarioConfig(**FAST), mc_runs=2)
        mc = run_monte_carlo(cfg, 4)
        runs = [run_once(build_scenario(cfg, cfg.seed + k), 4) for k in range(2)]
        for label in mc.mean_series:
            manual = (runs[0].series[label] + runs[1].series[label]) / 2
            assert np.allclose(mc.mean_series[label], manual, rtol=1e-15)

    def test_parallel_matches_serial(self):
        cfg = dataclasses.replace(ScenarioConfig(**FAST), mc_runs=3)
        serial = run_monte_carlo(cfg, 4, jobs=1)
        parallel = run_monte_carlo(cfg, 4, jobs=2)
        for label in serial.mean_series:
            assert np.array_equal(serial.mean_series[label], parallel.mean_series[label])


class TestSweep:
    def test_single_value_layout(self):
        cfg = dataclasses.replace(ScenarioConfig(**FAST), mc_runs=1)
        sweep = sweep_consensus_steps(cfg, [4])
        assert len(sweep.rows) == 4  # both cases, full exchange, benchmark
        assert {row["L"] for row in sweep.rows} == {4}

    def test_sweep_grid_row_count(self):
        cfg = dataclasses.replace(ScenarioConfig(**FAST), mc_runs=1, horizon=1.0)
        sweep = sweep_consensus_steps(cfg, list(range(1, 21)))
        assert len(sweep.rows) == 20 * 4

    def test_bandwidth_ratios_exact(self):
        cfg = dataclasses.replace(ScenarioConfig(**FAST), mc_runs=1)
        sweep = sweep_consensus_steps(cfg, [4, 8])
        for L in (4, 8):
            by_label = {row["label"]: row["total_scalars"] for row in sweep.rows
                        if row["L"] == L}
            assert 2 * by_label["icfpie[1]"] == by_label["icf[identity]"]
            assert 4 * by_label["icfpie[2]"] == by_label["icf[identity]"]

    def test_empty_grid_rejected(self):
        with pytest.raises(ConfigurationError):
            sweep_consensus_steps(ScenarioConfig(**FAST), [])


class TestOutputs:
    def test_timeseries_row_count(self, tmp_path):
        cfg = dataclasses.replace(ScenarioConfig(**FAST), mc_runs=1)
        mc = run_monte_carlo(cfg, 4)
        paths = emit_outputs(mc, tmp_path, cfg)
        csv_path = [p for p in paths if p.endswith("timeseries.csv")][0]
        lines = open(csv_path).read().splitlines()
        assert lines[0] == "t,alg,case,L,avg_error_norm"
        assert len(lines) == 1 + 3 * cfg.n_steps  # three algorithms

    def test_sweep_output_columns(self, tmp_path):
        cfg = dataclasses.replace(ScenarioConfig(**FAST), mc_runs=1)
        sweep = sweep_consensus_steps(cfg, [2, 4])
        paths = emit_outputs(sweep, tmp_path, cfg)
        csv_path = [p for p in paths if p.endswith("sweep.csv")][0]
        lines = open(csv_path).read().splitlines()
        assert lines[0] == "L,alg,case,final_error,total_scalars"
        assert len(lines) == 1 + 2 * 4

    def test_metadata_round_trip_reproduces_outputs_byte_identically(self, tmp_path):
        cfg = dataclasses.replace(ScenarioConfig(**FAST), mc_runs=2)
        mc = run_monte_carlo(cfg, cfg.L)
        first = tmp_path / "first"
        emit_outputs(mc, first, cfg, extra_metadata={"mode": "timeseries", "L": cfg.L})

        meta = json.loads((first / "metadata.json").read_text())
        cfg2, extra = load_config(first / "metadata.json")
        assert extra["L"] == cfg.L
        mc2 = run_monte_carlo(cfg2, extra["L"])
        second = tmp_path / "second"
        emit_outputs(mc2, second, cfg2, extra_metadata={"mode": "timeseries", "L": cfg.L})
        assert (first / "timeseries.csv").read_bytes() == (second / "timeseries.csv").read_bytes()
        assert meta["config"] == cfg2.to_dict()


class TestConfigFile:
    def test_key_value_parsing(self, tmp_path):
        text = """
        # reference scenario overrides
        n_nodes = 6
        horizon = 2.0
        selection = [[1, 3], [2, 4]]
        runs = 5
        consensus_steps = 8
        seed = 9
        """
        path = tmp_path / "run.cfg"
        path.write_text("\n".join(line.strip() for line in text.splitlines()))
        cfg, extra = load_config(path)
        assert cfg.n_nodes == 6
        assert cfg.horizon == 2.0
        assert cfg.selection == [[1, 3], [2, 4]]
        assert cfg.case_label() == "custom"
        assert cfg.mc_runs == 5
        assert cfg.L == 8
        assert cfg.seed == 9
        assert extra == {}

    def test_named_case_shorthand(self, tmp_path):
        path = tmp_path / "run.cfg"
        path.write_text("case = 2\n")
        cfg, _ = load_config(path)
        assert cfg.selection == "case2"

    def test_unknown_key_rejected(self, tmp_path):
        path = tmp_path / "run.cfg"
        path.write_text("bogus_knob = 1\n")
        with pytest.raises(ConfigurationError):
            load_config(path)

    def test_malformed_line_rejected(self, tmp_path):
        path = tmp_path / "run.cfg"
        path.write_text("this is not a config line\n")
        with pytest.raises(ConfigurationError):
            load_config(path)

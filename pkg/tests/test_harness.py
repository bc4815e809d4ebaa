import json
import logging

import numpy as np
import pytest

from chantrackkit._errors import ConfigError
from chantrackkit.data_classes import QuantMode, Scenario
from chantrackkit.harness import (
    DESCRIPTIONS,
    METRIC_COLUMNS,
    ExperimentConfig,
    MetricSample,
    aggregate,
    apply_overrides,
    emit_outputs,
    load_config,
    plot_table,
    read_metrics,
    run_experiment,
    iter_point_rows,
    sort_rows,
)
from chantrackkit.harness.cli import EXIT_CONFIG, EXIT_OK, main
from chantrackkit.harness.scenarios import SCENARIOS, Setting, noise_variance
from chantrackkit.utils import DB_FLOOR, mse_metric, to_db, trial_rng

TINY = dict(
    N=8,
    M=4,
    snr_db=[20.0],
    bits=[3],
    num_trials=2,
    max_em_iters=3,
    tracking_blocks=3,
)


class TestConfig:
    def test_defaults(self):
        cfg = ExperimentConfig()
        assert cfg.scenario is Scenario.EM_CONVERGENCE
        assert cfg.num_pilots == 8

    def test_string_enums(self):
        cfg = ExperimentConfig(scenario="mse_vs_bits", quant_mode="pdq")
        assert cfg.scenario is Scenario.MSE_VS_BITS
        assert cfg.quant_mode is QuantMode.PDQ

    @pytest.mark.parametrize(
        "kwargs",
        [
            dict(N=0),
            dict(P=40),
            dict(num_trials=-1),
            dict(snr_db=[]),
            dict(snr_db=[10.0, 10.0]),
            dict(bits=[0]),
            dict(quant_mode="none"),
            dict(scenario="fig9"),
            dict(velocity_kmh=-1.0),
        ],
    )
    def test_invalid(self, kwargs):
        with pytest.raises(ConfigError):
            ExperimentConfig(**kwargs)

    def test_load(self, tmp_path):
        path = tmp_path / "cfg.json"
        path.write_text(json.dumps({"N": 16, "snr_db": [5, 10], "rho_table": {"2": 0.1}}))
        cfg = load_config(path)
        assert cfg.N == 16
        assert cfg.snr_db == [5.0, 10.0]
        assert cfg.rho_table == {2: 0.1}
        assert load_config() == ExperimentConfig()

    @pytest.mark.parametrize("text", ['{"N": 16, "colour": 1}', "{not json", "[1, 2]"])
    def test_load_rejects(self, tmp_path, text):
        path = tmp_path / "cfg.json"
        path.write_text(text)
        with pytest.raises(ConfigError):
            load_config(path)

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigError):
            load_config(tmp_path / "absent.json")

    def test_overrides(self):
        cfg = apply_overrides(ExperimentConfig(), full_scale=True, seed=7, bits=None)
        assert (cfg.N, cfg.M, cfg.seed) == (128, 32, 7)
        assert cfg.bits == ExperimentConfig().bits
        assert apply_overrides(cfg, N=64).N == 64
        with pytest.raises(ConfigError):
            apply_overrides(cfg, colour=1)

    def test_round_trip_through_dict(self):
        cfg = ExperimentConfig(scenario="mse_vs_block", bits=[2])
        assert ExperimentConfig(**cfg.to_dict()) == cfg


class TestMetrics:
    def test_mse_examples(self):
        x = np.array([1.0 + 1j, -2.0, 0.5j])
        assert mse_metric(x, x) == 0
        assert to_db(mse_metric(x, x)) == DB_FLOOR
        assert mse_metric(np.zeros(3), x) == pytest.approx(1.0)
        assert to_db(mse_metric(1.1 * x, x)) == pytest.approx(-20.0)

    def test_block_average(self):
        truth = np.array([[1.0, 0.0], [2.0, 0.0]])
        est = np.array([[0.0, 0.0], [2.0, 0.0]])
        assert mse_metric(est, truth) == pytest.approx(0.5)

    def test_zero_blocks_excluded(self, caplog):
        truth = np.array([[1.0, 1.0], [0.0, 0.0]])
        est = np.array([[1.0, 0.0], [5.0, 5.0]])
        with caplog.at_level(logging.WARNING):
            assert mse_metric(est, truth) == pytest.approx(0.5)
        assert "zero-norm" in caplog.text
        assert np.isnan(mse_metric(np.ones(2), np.zeros(2)))

    def test_trial_streams(self):
        a = trial_rng(3, 1, 2).standard_normal(4)
        np.testing.assert_array_equal(a, trial_rng(3, 1, 2).standard_normal(4))
        assert not np.allclose(a, trial_rng(3, 2, 1).standard_normal(4))

    def test_aggregate_order_independent(self):
        samples = [
            MetricSample("s", "snr_db", 10.0, "mse_w", v)
            for v in (0.3, 0.1, np.nan, 0.2)
        ] + [MetricSample("s", "snr_db", 5.0, "mse_w", 1.0)]
        rows = aggregate("mse_vs_snr", samples)
        assert rows == aggregate("mse_vs_snr", samples[::-1])
        assert [(r.x, r.aggregate) for r in rows] == [
            (5.0, "mean"), (5.0, "median"), (10.0, "mean"), (10.0, "median")
        ]
        mean = rows[2]
        assert mean.n_trials == 3
        assert mean.value == pytest.approx(0.2)
        assert mean.value_db == pytest.approx(10 * np.log10(0.2))

    def test_non_finite_cell_dropped(self):
        assert aggregate("x", [MetricSample("s", "snr_db", 1.0, "mse_w", np.nan)]) == []

    def test_settings(self):
        assert Setting(None, QuantMode.UNIFORM).spec(1.0, 0.1).mode is QuantMode.NONE
        spec = Setting(2, QuantMode.PDQ).spec(1.0, 0.1, {2: 0.2})
        assert spec.rho == 0.2
        assert Setting(4, QuantMode.UNIFORM).label == "4bit"
        assert noise_variance(8, 10.0) == pytest.approx(0.8)


class TestOutputs:
    def _rows(self):
        samples = [
            MetricSample("none", "snr_db", x, "mse_w", v)
            for x, v in ((0.0, 0.1), (10.0, 0.01), (10.0, 0.03))
        ]
        return aggregate("mse_vs_snr", samples)

    def test_round_trip(self, tmp_path):
        rows = self._rows()
        csv_path, plot_path = emit_outputs(rows, tmp_path / "out", "mse_vs_snr")
        assert csv_path.name == "mse_vs_snr_metrics.csv"
        assert plot_path.exists()
        lines = csv_path.read_text().splitlines()
        assert lines[0].startswith("# generated ")
        assert lines[1] == ",".join(METRIC_COLUMNS)
        assert read_metrics(csv_path) == rows

    def test_empty_rows(self, tmp_path):
        csv_path, _ = emit_outputs([], tmp_path, "em_convergence")
        lines = csv_path.read_text().splitlines()
        assert lines[1] == ",".join(METRIC_COLUMNS)
        assert read_metrics(csv_path) == []

    def test_plot_columns(self):
        table = plot_table(self._rows())
        assert table.colnames == ["snr_db", "none:mse_w_db"]
        np.testing.assert_allclose(table["none:mse_w_db"], [-10.0, 10 * np.log10(0.02)])


class TestRunner:
    def test_no_trials(self):
        assert list(run_experiment(ExperimentConfig(num_trials=0))) == []

    def test_em_convergence_rows(self):
        cfg = ExperimentConfig(**TINY)
        rows = list(run_experiment(cfg))
        assert len(rows) == 3 * 2 * 2
        assert {r.metric for r in rows} == {"mse_alpha", "mse_lambda"}
        assert {r.x for r in rows} == {1.0, 2.0, 3.0}
        assert rows == list(run_experiment(cfg))

    def test_points_stream_as_they_finish(self, monkeypatch):
        calls = []

        def fake(cfg, point, rng_factory):
            calls.append(point)
            return [MetricSample("s", "snr_db", cfg.snr_db[point], "mse_w", 0.1)]

        monkeypatch.setitem(SCENARIOS, Scenario.EM_CONVERGENCE, fake)
        cfg = ExperimentConfig(snr_db=[10.0, 20.0], num_trials=2, workers=1)
        points = iter_point_rows(cfg)
        first = next(points)
        assert calls == [0, 0]
        assert {r.x for r in first} == {10.0}
        assert all(r.n_trials == 2 for r in first)
        assert {r.x for r in next(points)} == {20.0}
        assert calls == [0, 0, 1, 1]

    def test_workers_do_not_change_results(self):
        cfg = ExperimentConfig(**TINY)
        parallel = run_experiment(apply_overrides(cfg, workers=2))
        assert sort_rows(run_experiment(cfg)) == sort_rows(parallel)

    @pytest.mark.parametrize("scenario", [s for s in Scenario if s != Scenario.EM_CONVERGENCE])
    def test_scenarios_run(self, scenario):
        cfg = ExperimentConfig(scenario=scenario, num_trials=1, **{k: v for k, v in TINY.items() if k != "num_trials"})
        rows = list(run_experiment(cfg))
        assert rows
        assert all(r.scenario == scenario for r in rows)
        assert all(np.isfinite(r.value) for r in rows)


class TestCli:
    def test_list_scenarios(self, capsys):
        assert main(["list-scenarios"]) == EXIT_OK
        out = capsys.readouterr().out
        for scenario in Scenario:
            assert f"{scenario}\t{DESCRIPTIONS[scenario]}" in out

    def test_bad_config_file(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text("{")
        assert main(["run", "--config", str(path)]) == EXIT_CONFIG

    def test_bad_log_level(self):
        assert main(["--log-level", "chatty", "list-scenarios"]) == EXIT_CONFIG

    def test_validate_config(self, capsys):
        assert main(["validate-config", "--seed", "5", "--snr", "3", "6"]) == EXIT_OK
        data = json.loads(capsys.readouterr().out)
        assert data["seed"] == 5
        assert data["snr_db"] == [3.0, 6.0]

    def test_run_without_trials(self, tmp_path, capsys):
        out = tmp_path / "res"
        assert main(["run", "--trials", "0", "--out", str(out)]) == EXIT_OK
        assert (out / "em_convergence_metrics.csv").exists()
        assert (out / "em_convergence_plot.dat").exists()

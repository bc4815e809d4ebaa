from .config import ExperimentConfig, load_config, apply_overrides, FULL_SCALE
from .scenarios import SCENARIOS, DESCRIPTIONS, learn_and_track
from .metrics import MetricRow, MetricSample, METRIC_COLUMNS
from .runner import run_experiment, iter_point_rows, sort_rows, aggregate
from .outputs import emit_outputs, read_metrics, plot_table

__all__ = [
    "ExperimentConfig",
    "load_config",
    "apply_overrides",
    "FULL_SCALE",
    "SCENARIOS",
    "DESCRIPTIONS",
    "learn_and_track",
    "MetricRow",
    "MetricSample",
    "METRIC_COLUMNS",
    "run_experiment",
    "iter_point_rows",
    "sort_rows",
    "aggregate",
    "emit_outputs",
    "read_metrics",
    "plot_table",
]

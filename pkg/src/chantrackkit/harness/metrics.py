# Standard Libraries
from typing import NamedTuple

# Top-Level Imports
from chantrackkit.utils.metrics import DB_FLOOR, mse_metric, to_db

# Relative Imports
from .scenarios import MetricSample

# Fixed column order of the metrics CSV.
METRIC_COLUMNS = (
    "scenario",
    "series",
    "x_name",
    "x",
    "metric",
    "aggregate",
    "n_trials",
    "value",
    "value_db",
)


class MetricRow(NamedTuple):
    """
    One aggregated cell of an experiment. `value_db` is 10 log10 |value|
    floored at DB_FLOOR.
    """

    scenario: str
    series: str
    x_name: str
    x: float
    metric: str
    aggregate: str
    n_trials: int
    value: float
    value_db: float


__all__ = [
    "DB_FLOOR",
    "METRIC_COLUMNS",
    "MetricRow",
    "MetricSample",
    "mse_metric",
    "to_db",
]

# Standard Libraries
from collections import Counter, defaultdict
from concurrent.futures import ProcessPoolExecutor, as_completed
import logging
from typing import Iterable, Iterator, Optional

# Dependencies
import numpy as np

# Top-Level Imports
from chantrackkit.data_classes import Scenario
from chantrackkit._errors import ChannelKitError
from chantrackkit.utils import to_db, trial_rng

# Relative Imports
from .config import ExperimentConfig
from .metrics import MetricRow, MetricSample
from .scenarios import SCENARIOS

logger = logging.getLogger(__name__)

AGGREGATES = ("mean", "median")


def _run_trial(
    cfg: ExperimentConfig, point: int, trial: int
) -> Optional[list[MetricSample]]:
    """
    Runs one Monte-Carlo trial. Every call of the factory restarts the same
    stream, so all settings of a trial see the same channel and noise.
    """
    def rng_factory() -> np.random.Generator:
        return trial_rng(cfg.seed, point, trial)

    try:
        return SCENARIOS[cfg.scenario](cfg, point, rng_factory)
    except (ChannelKitError, np.linalg.LinAlgError) as err:
        logger.warning(
            "Trial %d at point %d (seed %d) failed and is excluded: %s",
            trial,
            point,
            cfg.seed,
            err,
        )
        return None


def _trial_jobs(cfg: ExperimentConfig) -> list[tuple[int, int]]:
    trials = cfg.num_trials
    if cfg.scenario == Scenario.TRACKING_EXAMPLE:
        trials = min(trials, 1)
    return [(p, t) for p in range(len(cfg.snr_db)) for t in range(trials)]


def aggregate(
    scenario: str, samples: list[MetricSample]
) -> list[MetricRow]:
    """
    Mean and median per (series, x, metric) over the trials that produced a
    finite value. Values are sorted first so the result does not depend on
    the order in which trials finished.
    """
    groups: dict[tuple, list[float]] = defaultdict(list)
    for s in samples:
        groups[(s.series, s.x_name, s.x, s.metric)].append(s.value)

    rows = []
    for key in sorted(groups):
        values = np.sort(np.asarray(groups[key], dtype=np.float64))
        values = values[np.isfinite(values)]
        if values.size == 0:
            logger.warning("No finite samples for %s; cell dropped", key)
            continue
        series, x_name, x, metric = key
        for name in AGGREGATES:
            value = float(np.mean(values) if name == "mean" else np.median(values))
            rows.append(
                MetricRow(
                    scenario,
                    series,
                    x_name,
                    float(x),
                    metric,
                    name,
                    int(values.size),
                    value,
                    float(to_db(abs(value))),
                )
            )
    return rows


def _finished_trials(
    cfg: ExperimentConfig, jobs: list[tuple[int, int]]
) -> Iterator[tuple[int, Optional[list[MetricSample]]]]:
    """Yields (point, samples or None) in completion order."""
    if cfg.workers == 1 or len(jobs) <= 1:
        for point, trial in jobs:
            yield point, _run_trial(cfg, point, trial)
        return
    with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
        futures = {pool.submit(_run_trial, cfg, p, t): p for p, t in jobs}
        for future in as_completed(futures):
            yield futures[future], future.result()


def iter_point_rows(cfg: ExperimentConfig) -> Iterator[list[MetricRow]]:
    """
    Yields the aggregated rows of each sweep point as soon as its last
    trial finishes. Every sample carries its SNR in the series or the x
    value, so aggregating per point equals aggregating over the whole run.
    """
    jobs = _trial_jobs(cfg)
    pending = Counter(point for point, _ in jobs)
    samples: dict[int, list[MetricSample]] = defaultdict(list)
    failed = 0
    for point, result in _finished_trials(cfg, jobs):
        pending[point] -= 1
        if result is None:
            failed += 1
        else:
            samples[point].extend(result)
        if pending[point] == 0:
            rows = aggregate(str(cfg.scenario), samples.pop(point, []))
            logger.debug(
                "SNR point %g dB finished with %d rows", cfg.snr_db[point], len(rows)
            )
            yield rows
    if failed:
        logger.warning("%d trials failed and were excluded", failed)


def sort_rows(rows: Iterable[MetricRow]) -> list[MetricRow]:
    """Orders rows by (series, x, metric); mean stays ahead of median."""
    return sorted(rows, key=lambda r: (r.series, r.x_name, r.x, r.metric))


def run_experiment(cfg: ExperimentConfig) -> Iterator[MetricRow]:
    """
    Runs every trial of `cfg` and streams the aggregated metric rows.

    Parameters
    ----------
    cfg: ExperimentConfig
        Validated experiment settings.

    Yields
    ------
    row: MetricRow
        Rows of one sweep point at a time, sorted within the point. Points
        arrive in completion order; pass the stream through `sort_rows`
        for a fixed order. Nothing is yielded when `cfg.num_trials` is 0.
    """
    logger.info(
        "Running %s: %d SNR points x %d trials",
        cfg.scenario,
        len(cfg.snr_db),
        cfg.num_trials,
    )
    for rows in iter_point_rows(cfg):
        yield from rows

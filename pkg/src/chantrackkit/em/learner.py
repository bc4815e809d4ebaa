# Standard Libraries
from dataclasses import dataclass, field
import logging
import time
from typing import Optional

# Dependencies
from astropy.table import Table
import numpy as np

# Top-Level Imports
from chantrackkit.data_classes import EmConfig, ModelParams, PathObservations
from chantrackkit.utils import mse_metric, to_db

# Relative Imports
from .estep import EStepResult, PosteriorStats, e_step
from .mstep import fixed_point_update

logger = logging.getLogger(__name__)


@dataclass
class EmTraceRow:
    iteration: int
    alpha: float
    mse_alpha_db: float
    mse_lambda_db: float
    runtime: float


@dataclass
class EmResult:
    params: ModelParams
    stats: PosteriorStats
    trace: list[EmTraceRow] = field(default_factory=list)
    iterations: int = 0

    def trace_table(self) -> Table:
        """Iteration trace as a table (iteration, alpha, MSE dB, runtime)."""
        names = ("iteration", "alpha", "mse_alpha_db", "mse_lambda_db", "runtime")
        rows = [tuple(getattr(row, n) for n in names) for row in self.trace]
        return Table(rows=rows or None, names=names)


def _relative_change(new: ModelParams, old: ModelParams) -> float:
    d_alpha = abs(new.alpha - old.alpha) / max(abs(old.alpha), 1e-12)
    d_lam = np.linalg.norm(new.lam - old.lam) / max(np.linalg.norm(old.lam), 1e-300)
    return float(max(d_alpha, d_lam))


def em_fit(
    obs: PathObservations,
    config: EmConfig = EmConfig(),
    init: Optional[ModelParams] = None,
    truth: Optional[ModelParams] = None,
) -> EmResult:
    """
    Learns the AR coefficient and the per-coefficient variances.

    Parameters
    ----------
    obs: PathObservations
        Training observations of all blocks.
    config: EmConfig, optional
        EM, fixed-point and GAMP settings.
    init: ModelParams, optional
        Starting point. Defaults to alpha = alpha_max and lambda = 1.
    truth: ModelParams, optional
        Ground truth; when given, every trace row carries MSE values.

    Returns
    -------
    result: EmResult
        Final parameters, the posterior statistics of the last E-step and
        the iteration trace.
    """
    if init is None:
        params = ModelParams(config.alpha_max, np.ones(obs.num_antennas))
    else:
        params = ModelParams(min(init.alpha, config.alpha_max), init.lam.copy())

    trace: list[EmTraceRow] = []
    warm: Optional[EStepResult] = None
    start = time.perf_counter()
    iterations = 0
    for it in range(config.max_em_iters):
        warm = e_step(obs, params, config, warm)
        new = fixed_point_update(
            warm.stats,
            params.alpha,
            alpha_max=config.alpha_max,
            lam_min=config.lam_min,
            max_iters=config.fixed_point_iters,
            tol=config.fixed_point_tol,
        )
        change = _relative_change(new, params)
        params = new
        iterations = it + 1

        mse_alpha = mse_lambda = float("nan")
        if truth is not None:
            mse_alpha = float(to_db(mse_metric(params.alpha, truth.alpha)))
            mse_lambda = float(to_db(mse_metric(params.lam, truth.lam)))
        trace.append(
            EmTraceRow(
                iteration=iterations,
                alpha=params.alpha,
                mse_alpha_db=mse_alpha,
                mse_lambda_db=mse_lambda,
                runtime=time.perf_counter() - start,
            )
        )
        logger.debug(
            "EM iteration %d: alpha=%.6f change=%.3e", iterations, params.alpha, change
        )
        if change < config.tol_param:
            break

    return EmResult(params, warm.stats, trace, iterations)

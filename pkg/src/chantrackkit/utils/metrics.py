# Standard Libraries
import logging

# Dependencies
import numpy as np
import numpy.typing as npt

logger = logging.getLogger(__name__)

DB_FLOOR = -120.0


def to_db(value: npt.ArrayLike, floor: float = DB_FLOOR) -> npt.NDArray:
    """10 log10(value), never below `floor`."""
    value = np.asarray(value, dtype=np.float64)
    with np.errstate(divide="ignore"):
        return np.maximum(10 * np.log10(value), floor)


def mse_metric(estimates: npt.ArrayLike, truths: npt.ArrayLike) -> float:
    """
    Normalised mean squared error averaged over blocks.

    Parameters
    ----------
    estimates, truths: array_like
        Matching sequences of blocks; axis 0 indexes the block. Scalars and
        1D inputs are treated as a single block.

    Returns
    -------
    mse: float
        (1/M) sum_m ||x_hat_m - x_m||^2 / ||x_m||^2 over blocks whose truth
        is non-zero. NaN if no block qualifies.
    """
    est = np.atleast_1d(np.asarray(estimates))
    true = np.atleast_1d(np.asarray(truths))
    if est.ndim == 1:
        est, true = est[None, :], true[None, :]
    est = est.reshape(est.shape[0], -1)
    true = true.reshape(true.shape[0], -1)
    err = np.sum(np.abs(est - true) ** 2, axis=1)
    power = np.sum(np.abs(true) ** 2, axis=1)
    keep = power > 0
    if not np.all(keep):
        logger.warning(
            "Excluding %d zero-norm truth blocks from the MSE",
            int(np.sum(~keep)),
        )
    if not np.any(keep):
        return float("nan")
    return float(np.mean(err[keep] / power[keep]))

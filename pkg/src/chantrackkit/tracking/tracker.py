# Standard Libraries
from dataclasses import dataclass
import logging
from typing import Optional

# Dependencies
from astropy.table import Table
import numpy as np
import numpy.typing as npt

# Top-Level Imports
from chantrackkit.data_classes import (
    DampingConfig,
    GaussianMessage,
    ModelParams,
    QuantizerSpec,
    TrackingConfig,
)
from chantrackkit.em import forward_message
from chantrackkit.gamp import GampState, gamp_solve, init_state

# Relative Imports
from .training import ReducedTraining
from .mismatch import MismatchDetector, normalized_innovation

logger = logging.getLogger(__name__)


@dataclass
class TrackState:
    """
    Online tracker state after `block` processed blocks.

    `fwd` and `meas` are the prior and measurement messages of the last
    block; `ops` counts multiply-accumulates spent in GAMP so far.
    """

    fwd: Optional[GaussianMessage] = None
    meas: Optional[GaussianMessage] = None
    gamp: Optional[GampState] = None
    block: int = 0
    ops: int = 0


def predict(state: TrackState, params: ModelParams) -> GaussianMessage:
    """
    Prior of the next block: the stationary prior on the first block,
    afterwards the AR transition of the last posterior.
    """
    if state.block == 0:
        return GaussianMessage(np.zeros(params.num_antennas), params.lam)
    return forward_message(state.fwd, state.meas, params.alpha, params.lam)


def track_step(
    y: npt.NDArray,
    training: ReducedTraining,
    params: ModelParams,
    state: TrackState,
    spec: QuantizerSpec,
    noise_var: float,
    damping: DampingConfig = DampingConfig(k_max=15),
) -> tuple[npt.NDArray[np.complex128], npt.NDArray[np.float64], TrackState]:
    """
    Processes one block of tracking pilots.

    Parameters
    ----------
    y: np.ndarray
        P_T observations of the block.
    training: ReducedTraining
        Pilot rows; the measurement matrix is D^H.
    params: ModelParams
        Learned parameters restricted to the support.
    state: TrackState
        State after the previous block.
    spec: QuantizerSpec
        ADC model.
    noise_var: float
        Complex noise variance.
    damping: DampingConfig, optional
        GAMP settings; `k_max` bounds the iterations per block.

    Returns
    -------
    w_hat: np.ndarray
        Posterior mean of the reduced channel.
    sigma: np.ndarray
        Posterior variances.
    state: TrackState
        State after this block.
    """
    fwd = predict(state, params)
    A = training.measurement
    if state.gamp is None:
        gamp = init_state(training.num_pilots, fwd)
    else:
        gamp = state.gamp.restart(fwd)
    gamp, iterations = gamp_solve(
        A, np.asarray(y), fwd, spec, noise_var, damping, state=gamp
    )
    ops = state.ops + 4 * training.num_support * training.num_pilots * iterations
    new_state = TrackState(fwd, gamp.measurement, gamp, state.block + 1, ops)
    return gamp.x.copy(), gamp.nu_x.copy(), new_state


@dataclass
class TrackRecord:
    block: int
    w_hat: npt.NDArray[np.complex128]
    sigma: npt.NDArray[np.float64]
    innovation: float
    trigger: bool
    w_true: Optional[npt.NDArray[np.complex128]] = None


class ChannelTracker:
    """
    Online tracker of the virtual channel on a detected support.

    Parameters
    ----------
    params: ModelParams
        Learned parameters over all N coefficients.
    support: np.ndarray
        Indices of the tracked coefficients.
    training: ReducedTraining
        Pilot rows, one per support index.
    spec: QuantizerSpec
        ADC model.
    noise_var: float
        Complex noise variance.
    config: TrackingConfig, optional
        GAMP budget and relearning trigger settings.
    """

    def __init__(
        self,
        params: ModelParams,
        support: npt.ArrayLike,
        training: ReducedTraining,
        spec: QuantizerSpec,
        noise_var: float,
        config: TrackingConfig = TrackingConfig(),
    ):
        self.support = np.asarray(support, dtype=np.intp)
        self.params = params.restrict(self.support)
        self.training = training
        self.spec = spec
        self.noise_var = noise_var
        self.config = config
        self.state = TrackState()
        self.detector = MismatchDetector(config.window, config.threshold)
        self.history: list[TrackRecord] = []

    def step(
        self, y: npt.NDArray, w_true: Optional[npt.NDArray] = None
    ) -> TrackRecord:
        fwd = predict(self.state, self.params)
        stat = normalized_innovation(
            y, self.training.measurement, fwd, self.spec, self.noise_var
        )
        trigger = self.detector.update(stat)
        if trigger:
            logger.info("Model mismatch detected at block %d", self.state.block)
        w_hat, sigma, self.state = track_step(
            y,
            self.training,
            self.params,
            self.state,
            self.spec,
            self.noise_var,
            self.config.damping,
        )
        record = TrackRecord(self.state.block - 1, w_hat, sigma, stat, trigger, w_true)
        self.history.append(record)
        return record

    def history_table(self) -> Table:
        """
        One row per (block, coefficient) with the true and estimated values,
        the posterior variance and the trigger flag of the block.
        """
        names = (
            "block",
            "coefficient",
            "w_true_re",
            "w_true_im",
            "w_hat_re",
            "w_hat_im",
            "sigma",
            "trigger",
        )
        rows = []
        for rec in self.history:
            true = rec.w_true if rec.w_true is not None else np.full(rec.w_hat.size, np.nan)
            for k, idx in enumerate(self.support):
                rows.append(
                    (
                        rec.block,
                        int(idx),
                        float(np.real(true[k])),
                        float(np.imag(true[k])),
                        float(rec.w_hat[k].real),
                        float(rec.w_hat[k].imag),
                        float(rec.sigma[k]),
                        rec.trigger,
                    )
                )
        return Table(rows=rows or None, names=names)

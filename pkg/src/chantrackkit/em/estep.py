# Standard Libraries
from dataclasses import dataclass
import logging
from typing import Optional

# Dependencies
import numpy as np
import numpy.typing as npt

# Top-Level Imports
from chantrackkit.data_classes import (
    EmConfig,
    GaussianMessage,
    ModelParams,
    PathObservations,
)
from chantrackkit.gamp import GampState, gamp_block_update, init_state

# Relative Imports
from .messages import BlockMessages, backward_pass, forward_pass, smoother_gain

logger = logging.getLogger(__name__)


def compute_pi(
    h_prev: npt.ArrayLike,
    h_cur: npt.ArrayLike,
    theta_prev: npt.ArrayLike,
    alpha: float,
) -> npt.NDArray[np.complex128]:
    """
    Diagonal of the cross-block second moment
    h_prev h_cur^H + alpha (Theta_prev - h_prev h_prev^H).
    """
    h_prev = np.asarray(h_prev, dtype=np.complex128)
    h_cur = np.asarray(h_cur, dtype=np.complex128)
    theta_prev = np.asarray(theta_prev, dtype=np.float64)
    return h_prev * h_cur.conj() + alpha * (theta_prev - np.abs(h_prev) ** 2)


class PosteriorStats:
    """
    Posterior statistics consumed by the M-step.

    Parameters
    ----------
    h_hat: np.ndarray
        M x N posterior means.
    tau: np.ndarray
        M x N posterior variances.
    pi: np.ndarray
        M x N diagonals of Pi_{m-1,m}. Row 0 has no predecessor and is zero.
    """

    def __init__(self, h_hat: npt.NDArray, tau: npt.NDArray, pi: npt.NDArray):
        self.h_hat = np.asarray(h_hat, dtype=np.complex128)
        self.tau = np.asarray(tau, dtype=np.float64)
        self.pi = np.asarray(pi, dtype=np.complex128)

    @classmethod
    def from_posterior(
        cls, h_hat: npt.NDArray, tau: npt.NDArray, alpha: float
    ) -> "PosteriorStats":
        h_hat = np.asarray(h_hat, dtype=np.complex128)
        tau = np.asarray(tau, dtype=np.float64)
        pi = np.zeros_like(h_hat)
        theta = tau + np.abs(h_hat) ** 2
        for m in range(1, h_hat.shape[0]):
            pi[m] = compute_pi(h_hat[m - 1], h_hat[m], theta[m - 1], alpha)
        return cls(h_hat, tau, pi)

    @classmethod
    def from_messages(
        cls,
        h_hat: npt.NDArray,
        tau: npt.NDArray,
        messages: BlockMessages,
        params: ModelParams,
    ) -> "PosteriorStats":
        """
        Statistics with the exact lag-one moments of the chain,
        Pi_{m-1,m} = h_{m-1} h_m^H + J_m tau_m.

        `from_posterior` replaces the covariance term with
        alpha (Theta_{m-1} - h h^H). Near alpha = 1 that term makes the
        expected transition energy telescope to zero whenever the smoothed
        means are flat, so the alpha update cannot leave its starting point.
        """
        h_hat = np.asarray(h_hat, dtype=np.complex128)
        tau = np.asarray(tau, dtype=np.float64)
        pi = np.zeros_like(h_hat)
        for m in range(1, h_hat.shape[0]):
            gain = smoother_gain(
                messages.fwd(m - 1), messages.meas(m - 1), params.alpha, params.lam
            )
            pi[m] = h_hat[m - 1] * h_hat[m].conj() + gain * tau[m]
        return cls(h_hat, tau, pi)

    @property
    def theta(self) -> npt.NDArray[np.float64]:
        """Diagonals of Theta_m = Diag(tau) + h h^H."""
        return self.tau + np.abs(self.h_hat) ** 2

    @property
    def num_blocks(self) -> int:
        return self.h_hat.shape[0]


@dataclass
class EStepResult:
    stats: PosteriorStats
    messages: BlockMessages
    states: list[GampState]
    rounds: int


def e_step(
    obs: PathObservations,
    params: ModelParams,
    config: EmConfig = EmConfig(),
    warm: Optional[EStepResult] = None,
) -> EStepResult:
    """
    Message-passing E-step over the block chain.

    Each round sweeps forward messages over all blocks, runs one GAMP
    iteration per block against the temporal prior fwd x bwd (exchanging
    the measurement messages), then sweeps backward messages. Rounds stop
    after `config.k_max` or once the posterior means settle to within
    `config.damping.tol`.

    Parameters
    ----------
    obs: PathObservations
        Observations and measurement matrices of all blocks.
    params: ModelParams
        Current parameter estimate.
    config: EmConfig, optional
        Round budget and GAMP damping.
    warm: EStepResult, optional
        Result of the previous EM iteration; its measurement messages and
        GAMP states seed this run.
    """
    M, P, N = obs.B.shape
    if warm is None:
        messages = BlockMessages(M, N)
        start = GaussianMessage(np.zeros(N), params.lam)
        states = [init_state(P, start) for _ in range(M)]
    else:
        messages = warm.messages
        states = list(warm.states)
    smooth = params.alpha > 0
    if not smooth:
        # every backward message is uninformative without temporal coupling
        messages.bwd_var[:] = np.inf

    rounds = 0
    for k in range(config.k_max):
        previous = np.stack([state.x for state in states])
        for m in range(M):
            forward_pass(messages, params, m)
        for m in range(M):
            states[m] = gamp_block_update(
                obs.B[m],
                obs.y[m],
                messages.prior(m),
                obs.quantizer,
                obs.noise_var,
                states[m],
                config.damping,
                iteration=k,
            )
            messages.set_meas(m, states[m].measurement)
        if smooth:
            for m in reversed(range(M)):
                backward_pass(messages, params, m)
        rounds = k + 1
        current = np.stack([state.x for state in states])
        if np.linalg.norm(current - previous) <= config.damping.tol * np.linalg.norm(
            current
        ):
            break
    logger.debug("E-step finished after %d rounds", rounds)

    h_hat = np.stack([state.x for state in states])
    tau = np.stack([state.nu_x for state in states])
    stats = PosteriorStats.from_messages(h_hat, tau, messages, params)
    return EStepResult(stats, messages, states, rounds)

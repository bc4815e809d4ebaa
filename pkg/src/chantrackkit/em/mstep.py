# Standard Libraries
import logging

# Dependencies
import numpy as np
import numpy.typing as npt

# Top-Level Imports
from chantrackkit.data_classes import ALPHA_MAX, LAMBDA_MIN, ModelParams
from chantrackkit._errors import DomainError, NumericalError

# Relative Imports
from .estep import PosteriorStats

logger = logging.getLogger(__name__)


def _transition_energy(
    stats: PosteriorStats, alpha: float
) -> npt.NDArray[np.float64]:
    # sum over m >= 2 of Theta_m - 2 alpha Re Pi_m + alpha^2 Theta_{m-1}
    theta = stats.theta
    return np.sum(
        theta[1:] - 2 * alpha * stats.pi[1:].real + alpha**2 * theta[:-1], axis=0
    )


def expected_log_prior(
    stats: PosteriorStats, alpha: float, lam: npt.ArrayLike
) -> float:
    """
    Expected log-density of the AR(1) channel prior under the posterior,
    up to constants, summed over the coefficients with lambda > 0.
    """
    lam = np.asarray(lam, dtype=np.float64)
    if not 0 <= alpha < 1:
        raise DomainError(f"alpha must lie in [0, 1) ({alpha})")
    active = lam > 0
    M = stats.num_blocks
    theta = stats.theta[:, active]
    lam_a = lam[active]
    energy = _transition_energy(stats, alpha)[active]
    first = -np.log(lam_a) - theta[0] / lam_a
    rest = -(M - 1) * (np.log(1 - alpha**2) + np.log(lam_a)) - energy / (
        (1 - alpha**2) * lam_a
    )
    return float(np.sum(first + rest))


def m_step_lambda(
    stats: PosteriorStats, alpha: float, lam_min: float = LAMBDA_MIN
) -> npt.NDArray[np.float64]:
    """
    Closed-form maximiser of the expected log-prior in lambda for fixed
    alpha, floored at `lam_min`.
    """
    if not 0 <= alpha < 1:
        raise DomainError(f"alpha must lie in [0, 1) ({alpha})")
    M = stats.num_blocks
    lam = (stats.theta[0] + _transition_energy(stats, alpha) / (1 - alpha**2)) / M
    return np.maximum(lam, lam_min)


def _alpha_sums(
    stats: PosteriorStats, lam: npt.NDArray, lam_floor: float
) -> tuple[int, float, float, float]:
    active = lam > lam_floor
    if not np.any(active):
        raise NumericalError(
            "No coefficient above the lambda floor", {"lam_floor": lam_floor}
        )
    theta = stats.theta[:, active]
    inv = 1.0 / lam[active]
    K = (stats.num_blocks - 1) * int(np.sum(active))
    A = float(np.sum(theta[1:] * inv))
    C = float(np.sum(theta[:-1] * inv))
    Bp = float(np.sum(stats.pi[1:, active].real * inv))
    return K, A, C, Bp


def alpha_objective(alpha: float, K: int, A: float, C: float, Bp: float) -> float:
    """
    Alpha-dependent part of the expected log-prior:
    -K ln(1 - a^2) - (A - 2 a Bp + a^2 C) / (1 - a^2).
    """
    one_minus = 1 - alpha**2
    return -K * np.log(one_minus) - (A - 2 * alpha * Bp + alpha**2 * C) / one_minus


def alpha_cubic(K: int, A: float, C: float, Bp: float) -> npt.NDArray[np.float64]:
    """
    Coefficients (highest power first) of the stationarity condition
    K a^3 - Bp a^2 + (A + C - K) a - Bp = 0.
    """
    return np.array([K, -Bp, A + C - K, -Bp], dtype=np.float64)


def _polish(coeffs: npt.NDArray, root: float) -> float:
    deriv = np.polyder(coeffs)
    for _ in range(3):
        slope = np.polyval(deriv, root)
        if slope == 0:
            break
        root -= np.polyval(coeffs, root) / slope
    return root


def m_step_alpha(
    stats: PosteriorStats,
    lam: npt.ArrayLike,
    alpha_max: float = ALPHA_MAX,
    lam_floor: float = LAMBDA_MIN,
) -> float:
    """
    Maximiser of the expected log-prior in alpha for fixed lambda.

    Parameters
    ----------
    stats: PosteriorStats
        Posterior statistics of at least two blocks.
    lam: array_like
        Current lambda. Coefficients at or below `lam_floor` are ignored.
    alpha_max: float, optional
        Upper end of the search interval.
    lam_floor: float, optional
        Lambda floor of the learner.

    Returns
    -------
    alpha: float
        The best of the real cubic roots inside [0, alpha_max] and the two
        interval endpoints.
    """
    lam = np.asarray(lam, dtype=np.float64)
    if stats.num_blocks < 2:
        raise DomainError("alpha is not identifiable from a single block")
    K, A, C, Bp = _alpha_sums(stats, lam, lam_floor)
    coeffs = alpha_cubic(K, A, C, Bp)
    if not np.all(np.isfinite(coeffs)):
        raise NumericalError(
            "Non-finite alpha polynomial", {"coefficients": coeffs.tolist()}
        )

    candidates = [0.0, alpha_max]
    scale = np.max(np.abs(coeffs))
    for root in np.roots(coeffs / scale):
        if abs(root.imag) > 1e-8:
            continue
        polished = _polish(coeffs, float(root.real))
        if 0 <= polished <= alpha_max:
            candidates.append(polished)
    scores = [alpha_objective(a, K, A, C, Bp) for a in candidates]
    best = candidates[int(np.argmax(scores))]
    logger.debug("alpha candidates %s -> %.6f", candidates, best)
    return float(best)


def fixed_point_update(
    stats: PosteriorStats,
    alpha: float,
    alpha_max: float = ALPHA_MAX,
    lam_min: float = LAMBDA_MIN,
    max_iters: int = 20,
    tol: float = 1e-10,
) -> ModelParams:
    """
    Alternates the lambda and alpha updates starting from `alpha`.
    """
    alpha = min(alpha, alpha_max)
    lam = m_step_lambda(stats, alpha, lam_min)
    if stats.num_blocks < 2:
        return ModelParams(alpha, lam)
    for _ in range(max_iters):
        new_alpha = m_step_alpha(stats, lam, alpha_max, lam_min)
        new_lam = m_step_lambda(stats, new_alpha, lam_min)
        change = max(
            abs(new_alpha - alpha) / max(abs(alpha), 1e-12),
            np.linalg.norm(new_lam - lam) / max(np.linalg.norm(lam), 1e-300),
        )
        alpha, lam = new_alpha, new_lam
        if change < tol:
            break
    return ModelParams(alpha, lam)

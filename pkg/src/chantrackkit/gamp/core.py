# Standard Libraries
from dataclasses import dataclass, replace
import logging
from typing import Optional

# Dependencies
import numpy as np
import numpy.typing as npt

# Top-Level Imports
from chantrackkit.data_classes import DampingConfig, GaussianMessage, QuantizerSpec
from chantrackkit._errors import DimensionError, NumericalError

# Relative Imports
from .scalar import g_out, linearize_output

logger = logging.getLogger(__name__)

_TINY = np.finfo(np.float64).tiny
# smallest extrinsic output precision, relative to 1 / nu_z
_EXTRINSIC_FLOOR = 1e-10


@dataclass
class GampState:
    """
    Iterate of the damped GAMP solver for one block.

    `nu_p` holds precisions of the output predictions, the parameterisation
    in which p = s + nu_p (B x) on the first iteration. (r, nu_r) is the
    extrinsic message the observations send to each coefficient, so that
    combining it with the prior gives (x, nu_x). `y_lin`, `w_lin` and
    `nu_z` carry the Gaussian-equivalent outputs and the posterior output
    variances of the last LMMSE stage; they are None before the first
    iteration.
    """

    x: npt.NDArray[np.complex128]
    nu_x: npt.NDArray[np.float64]
    s: npt.NDArray[np.complex128]
    nu_s: npt.NDArray[np.float64]
    p: npt.NDArray[np.complex128]
    nu_p: npt.NDArray[np.float64]
    r: npt.NDArray[np.complex128]
    nu_r: npt.NDArray[np.float64]
    y_lin: Optional[npt.NDArray[np.complex128]] = None
    w_lin: Optional[npt.NDArray[np.float64]] = None
    nu_z: Optional[npt.NDArray[np.float64]] = None

    @property
    def measurement(self) -> GaussianMessage:
        """Per-coefficient message (r, nu_r) from the observations."""
        return GaussianMessage(self.r, self.nu_r)

    @property
    def posterior(self) -> GaussianMessage:
        return GaussianMessage(self.x, self.nu_x)

    def restart(self, prior: GaussianMessage) -> "GampState":
        """
        Warm start for new observations: x and nu_x move to the prior, the
        output residual s is kept and the output linearisation is dropped.
        """
        informative = np.isfinite(prior.var)
        return replace(
            self,
            x=np.where(informative, prior.mean, 0.0).astype(np.complex128),
            nu_x=np.where(informative, prior.var, 1.0),
            y_lin=None,
            w_lin=None,
            nu_z=None,
        )


def init_state(num_outputs: int, prior: GaussianMessage) -> GampState:
    """
    Starts from the prior: x = prior mean, nu_x = prior variance (with
    uninformative coefficients at zero mean and unit variance), s = 0.
    """
    D = len(prior)
    informative = np.isfinite(prior.var)
    return GampState(
        x=np.where(informative, prior.mean, 0.0).astype(np.complex128),
        nu_x=np.where(informative, prior.var, 1.0),
        s=np.zeros(num_outputs, dtype=np.complex128),
        nu_s=np.zeros(num_outputs),
        p=np.zeros(num_outputs, dtype=np.complex128),
        nu_p=np.ones(num_outputs),
        r=np.zeros(D, dtype=np.complex128),
        nu_r=np.full(D, np.inf),
    )


def _check_finite(iteration: int, **arrays: npt.NDArray) -> None:
    for name, values in arrays.items():
        if not np.all(np.isfinite(values)):
            raise NumericalError(
                "Non-finite GAMP intermediate",
                {"iteration": iteration, "quantity": name},
            )


def lmmse_stage(
    B: npt.NDArray,
    prior: GaussianMessage,
    y_lin: npt.NDArray,
    w_lin: npt.NDArray,
) -> tuple[GaussianMessage, GaussianMessage, npt.NDArray[np.float64]]:
    """
    Exact Gaussian posterior of x for y_lin = B x + CN(0, diag(w_lin)).

    Parameters
    ----------
    B: np.ndarray
        P x D measurement matrix.
    prior: GaussianMessage
        Per-coefficient prior. Infinite variances need positive `w_lin`.
    y_lin, w_lin: np.ndarray
        Gaussian-equivalent observations and their noise variances.

    Returns
    -------
    posterior: GaussianMessage
        Posterior means and the diagonal of the posterior covariance.
    extrinsic: GaussianMessage
        Message that reproduces `posterior` when combined with `prior`.
    nu_z: np.ndarray
        Diagonal of the posterior covariance of z = B x.

    Notes
    -----
    With all prior variances finite the P x P system
    C = B diag(pi) B^H + diag(w_lin) is solved once. With q_d = b_d^H C^-1 b_d
    the extrinsic variance of coefficient d is 1 / q_d - pi_d, which stays
    defined for pi_d = 0.
    """
    P, D = B.shape
    pi = prior.var
    w_lin = np.maximum(w_lin, 0.0)
    if np.all(np.isfinite(pi)):
        mu = prior.mean
        C = (B * pi) @ B.conj().T + np.diag(w_lin)
        rhs = np.column_stack([y_lin - B @ mu, B, np.eye(P)])
        try:
            sol = np.linalg.solve(C, rhs)
        except np.linalg.LinAlgError as exc:
            raise NumericalError("Singular LMMSE system", {"P": P, "D": D}) from exc
        back = B.conj().T @ sol[:, 0]
        q = np.maximum(np.real(np.sum(B.conj() * sol[:, 1 : D + 1], axis=0)), _TINY)
        nu_e = np.maximum(1 / q - pi, 0.0)
        x = mu + pi * back
        var = pi * nu_e * q
        r = mu + back / q
        nu_z = w_lin - w_lin**2 * np.real(np.diag(sol[:, D + 1 :]))
    else:
        prec = 1 / pi
        w_safe = np.maximum(w_lin, _TINY)
        info = np.diag(prec) + (B.conj().T / w_safe) @ B
        try:
            cov = np.linalg.inv(info)
        except np.linalg.LinAlgError as exc:
            raise NumericalError("Singular LMMSE system", {"P": P, "D": D}) from exc
        known = np.where(np.isfinite(pi), prior.mean, 0.0)
        x = cov @ (prec * known + B.conj().T @ (y_lin / w_safe))
        var = np.real(np.diag(cov))
        with np.errstate(divide="ignore"):
            nu_e = 1 / np.maximum(1 / var - prec, _TINY)
        r = nu_e * (x / var - prec * known)
        nu_z = np.real(np.einsum("pd,de,pe->p", B, cov, B.conj()))
    return (
        GaussianMessage(x, np.maximum(var, 0.0)),
        GaussianMessage(r, nu_e),
        np.maximum(nu_z, _TINY),
    )


def gamp_block_update(
    B: npt.NDArray,
    y: npt.NDArray,
    prior: GaussianMessage,
    spec: QuantizerSpec,
    noise_var: float,
    state: GampState,
    damping: DampingConfig,
    iteration: int = 0,
) -> GampState:
    """
    One damped GAMP iteration.

    The output step predicts z, applies `g_out` and turns the result into
    a Gaussian-equivalent observation with `linearize_output`. The input
    step is the exact `lmmse_stage` for that observation. Coefficient
    variances are therefore exact for Gaussian outputs whatever the
    structure of B, and the unquantized fixed point is the LMMSE estimate.

    Parameters
    ----------
    B: np.ndarray
        P x D measurement matrix.
    y: np.ndarray
        P observations in the form `adc` produces for `spec`.
    prior: GaussianMessage
        Per-coefficient Gaussian prior (infinite variance allowed).
    spec: QuantizerSpec
        ADC model used by the output function.
    noise_var: float
        Complex noise variance.
    state: GampState
        Current iterate.
    damping: DampingConfig
        Damping factors for the output and input updates.
    iteration: int, optional
        Index reported in error diagnostics.

    Returns
    -------
    state: GampState
        Next iterate; the input is not modified.
    """
    P, D = B.shape
    if y.shape != (P,) or state.x.shape != (D,) or len(prior) != D:
        raise DimensionError(
            f"Inconsistent GAMP dimensions: B {B.shape}, y {y.shape}, "
            f"x {state.x.shape}, prior {len(prior)}"
        )
    theta_s, theta_x = damping.theta_s, damping.theta_x

    z = B @ state.x
    if state.w_lin is None:
        nu_p = 1.0 / np.maximum(np.abs(B) ** 2 @ state.nu_x, _TINY)
        p = state.s + nu_p * z
    else:
        # leave-one-out prediction: the output's own observation is removed
        nu_p = np.maximum(
            1 / state.nu_z - 1 / np.maximum(state.w_lin, _TINY),
            _EXTRINSIC_FLOOR / state.nu_z,
        )
        p = nu_p * z + (z - state.y_lin) / np.maximum(state.w_lin, _TINY)
    g, dg = g_out(p, nu_p, y, noise_var, spec)
    s = (1 - theta_s) * state.s + theta_s * g
    nu_s = (1 - theta_s) * state.nu_s + theta_s * np.maximum(nu_p * dg, 0.0)
    y_lin, w_lin = linearize_output(p, nu_p, y, noise_var, spec)
    _check_finite(iteration, p=p, s=s, nu_s=nu_s, y_lin=y_lin)

    post, extrinsic, nu_z = lmmse_stage(B, prior, y_lin, w_lin)
    x = (1 - theta_x) * state.x + theta_x * post.mean
    nu_x = (1 - theta_x) * state.nu_x + theta_x * post.var
    _check_finite(iteration, r=extrinsic.mean, x=x, nu_x=nu_x)

    return replace(
        state,
        x=x,
        nu_x=nu_x,
        s=s,
        nu_s=nu_s,
        p=p,
        nu_p=nu_p,
        r=extrinsic.mean,
        nu_r=extrinsic.var,
        y_lin=y_lin,
        w_lin=w_lin,
        nu_z=nu_z,
    )


def gamp_solve(
    B: npt.NDArray,
    y: npt.NDArray,
    prior: GaussianMessage,
    spec: QuantizerSpec,
    noise_var: float,
    damping: DampingConfig = DampingConfig(),
    state: Optional[GampState] = None,
    k_max: Optional[int] = None,
) -> tuple[GampState, int]:
    """
    Runs `gamp_block_update` until the relative change of x drops below
    `damping.tol` or `k_max` (default `damping.k_max`) iterations are spent.

    Returns
    -------
    state: GampState
        Final iterate.
    iterations: int
        Number of iterations performed.
    """
    if state is None:
        state = init_state(B.shape[0], prior)
    budget = damping.k_max if k_max is None else k_max
    for k in range(budget):
        new = gamp_block_update(
            B, y, prior, spec, noise_var, state, damping, iteration=k
        )
        change = np.linalg.norm(new.x - state.x)
        state = new
        if change <= damping.tol * np.linalg.norm(new.x):
            logger.debug("GAMP converged after %d iterations", k + 1)
            return state, k + 1
    return state, budget

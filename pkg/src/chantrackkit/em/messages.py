# Dependencies
import numpy as np
import numpy.typing as npt

# Top-Level Imports
from chantrackkit.data_classes import GaussianMessage, ModelParams
from chantrackkit._errors import DomainError, NumericalError


def combine_time_prior(
    first: GaussianMessage, second: GaussianMessage
) -> GaussianMessage:
    """
    Product of two Gaussian messages on the same coefficients.

    Precisions add and the mean is precision-weighted; an infinite-variance
    side drops out and a zero-variance side pins the result.
    """
    if np.any((first.var == 0) & (second.var == 0)):
        raise DomainError("Cannot combine two point-mass messages")
    prec_1, prec_2 = first.precision, second.precision
    total = prec_1 + prec_2
    with np.errstate(divide="ignore", invalid="ignore"):
        var = np.where(total == 0, np.inf, 1.0 / total)
        weighted = (prec_1 * first.mean + prec_2 * second.mean) / total
    mean = np.where(
        first.var == 0,
        first.mean,
        np.where(second.var == 0, second.mean, np.where(total == 0, 0, weighted)),
    )
    return GaussianMessage(mean, var)


def forward_message(
    fwd_prev: GaussianMessage,
    meas_prev: GaussianMessage,
    alpha: float,
    lam: npt.NDArray,
) -> GaussianMessage:
    """
    Pushes the belief on block m-1 through the AR transition:
    (alpha mu, alpha^2 nu + (1 - alpha^2) lambda).
    """
    belief = combine_time_prior(meas_prev, fwd_prev)
    if alpha == 0:
        return GaussianMessage(np.zeros_like(belief.mean), lam)
    var = alpha**2 * belief.var + (1 - alpha**2) * lam
    if np.any(var < 0):
        raise NumericalError("Negative forward message variance", {"alpha": alpha})
    return GaussianMessage(alpha * belief.mean, var)


def backward_message(
    bwd_next: GaussianMessage,
    meas_next: GaussianMessage,
    alpha: float,
    lam: npt.NDArray,
) -> GaussianMessage:
    """
    Pulls the belief on block m+1 back through the AR transition:
    (mu / alpha, (nu + (1 - alpha^2) lambda) / alpha^2).
    """
    if alpha == 0:
        raise DomainError("Backward messages are undefined for alpha = 0")
    belief = combine_time_prior(meas_next, bwd_next)
    return GaussianMessage(
        belief.mean / alpha, (belief.var + (1 - alpha**2) * lam) / alpha**2
    )


class BlockMessages:
    """
    Forward, backward and measurement messages of every coefficient of every
    block, stored as M x N arrays.
    """

    def __init__(self, num_blocks: int, num_coeffs: int):
        shape = (num_blocks, num_coeffs)
        self.fwd_mean = np.zeros(shape, dtype=np.complex128)
        self.fwd_var = np.full(shape, np.inf)
        self.bwd_mean = np.zeros(shape, dtype=np.complex128)
        self.bwd_var = np.full(shape, np.inf)
        self.meas_mean = np.zeros(shape, dtype=np.complex128)
        self.meas_var = np.full(shape, np.inf)

    @property
    def num_blocks(self) -> int:
        return self.fwd_mean.shape[0]

    def fwd(self, m: int) -> GaussianMessage:
        return GaussianMessage(self.fwd_mean[m], self.fwd_var[m])

    def bwd(self, m: int) -> GaussianMessage:
        return GaussianMessage(self.bwd_mean[m], self.bwd_var[m])

    def meas(self, m: int) -> GaussianMessage:
        return GaussianMessage(self.meas_mean[m], self.meas_var[m])

    def set_fwd(self, m: int, msg: GaussianMessage) -> None:
        self.fwd_mean[m], self.fwd_var[m] = msg.mean, msg.var

    def set_bwd(self, m: int, msg: GaussianMessage) -> None:
        self.bwd_mean[m], self.bwd_var[m] = msg.mean, msg.var

    def set_meas(self, m: int, msg: GaussianMessage) -> None:
        self.meas_mean[m], self.meas_var[m] = msg.mean, msg.var

    def prior(self, m: int) -> GaussianMessage:
        """Temporal prior of block m, the product of its fwd and bwd messages."""
        return combine_time_prior(self.fwd(m), self.bwd(m))


def forward_pass(
    messages: BlockMessages, params: ModelParams, m: int
) -> GaussianMessage:
    """
    Computes and stores the forward message into block m (0-based). The
    first block receives the stationary prior (0, lambda).
    """
    if m == 0:
        msg = GaussianMessage(np.zeros(params.num_antennas), params.lam)
    else:
        msg = forward_message(
            messages.fwd(m - 1), messages.meas(m - 1), params.alpha, params.lam
        )
    messages.set_fwd(m, msg)
    return msg


def backward_pass(
    messages: BlockMessages, params: ModelParams, m: int
) -> GaussianMessage:
    """
    Computes and stores the backward message into block m. The last block
    receives an uninformative message.
    """
    if params.alpha == 0:
        raise DomainError("Backward messages are undefined for alpha = 0")
    if m == messages.num_blocks - 1:
        msg = GaussianMessage.uninformative(params.num_antennas)
    else:
        msg = backward_message(
            messages.bwd(m + 1), messages.meas(m + 1), params.alpha, params.lam
        )
    messages.set_bwd(m, msg)
    return msg


def smoother_gain(
    fwd_prev: GaussianMessage,
    meas_prev: GaussianMessage,
    alpha: float,
    lam: npt.NDArray,
) -> npt.NDArray[np.float64]:
    """
    Gain J with E[h_{m-1} | h_m, past] = a + J (h_m - alpha a), from the
    filtered belief (a, P) on block m-1.

    The posterior cross-covariance of blocks m-1 and m is J tau_m, since the
    future observations reach h_{m-1} only through h_m.
    """
    filtered = combine_time_prior(meas_prev, fwd_prev).var
    denom = alpha**2 * filtered + (1 - alpha**2) * lam
    gain = np.zeros_like(filtered)
    np.divide(alpha * filtered, denom, out=gain, where=denom > 0)
    return gain

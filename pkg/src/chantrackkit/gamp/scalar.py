# Dependencies
import numpy as np
import numpy.typing as npt

# Top-Level Imports
from chantrackkit.data_classes import GaussianMessage, QuantizerSpec, QuantMode
from chantrackkit._errors import DomainError, NumericalError
from chantrackkit.quantizer import log_phi_diff, resolve_rho, thresholds

_LOG_SQRT_2PI = 0.5 * np.log(2 * np.pi)


def _log_normal_pdf(x: npt.NDArray) -> npt.NDArray:
    with np.errstate(over="ignore"):
        return -0.5 * x**2 - _LOG_SQRT_2PI


def trunc_normal_moments(
    mu: npt.ArrayLike,
    var: npt.ArrayLike,
    a: npt.ArrayLike,
    b: npt.ArrayLike,
) -> tuple[npt.NDArray[np.float64], npt.NDArray[np.float64]]:
    """
    Mean and variance of N(mu, var) restricted to [a, b].

    Parameters
    ----------
    mu, var: array_like
        Mean and variance of the parent normal.
    a, b: array_like
        Truncation bounds with a < b; infinite bounds are allowed.

    Returns
    -------
    mean, variance: np.ndarray
        Moments of the truncated distribution.

    Notes
    -----
    The normalising mass is evaluated in the log domain and both density
    ratios are formed as exp(log phi - log Z), so cells far in a tail keep
    full precision.
    """
    mu, var, a, b = np.broadcast_arrays(
        *(np.asarray(v, dtype=np.float64) for v in (mu, var, a, b))
    )
    sd = np.sqrt(var)
    with np.errstate(divide="ignore", invalid="ignore"):
        alpha = (a - mu) / sd
        beta = (b - mu) / sd
    log_z = log_phi_diff(alpha, beta)
    if np.any(~np.isfinite(log_z)):
        bad = np.flatnonzero(~np.isfinite(log_z))[0]
        raise NumericalError(
            "Truncation interval carries no probability mass",
            {
                "mu": float(mu.flat[bad]),
                "var": float(var.flat[bad]),
                "a": float(a.flat[bad]),
                "b": float(b.flat[bad]),
            },
        )
    ratio_a = np.exp(_log_normal_pdf(alpha) - log_z)
    ratio_b = np.exp(_log_normal_pdf(beta) - log_z)
    # phi(+-inf) * (+-inf) is zero in the limit
    alpha_term = np.where(np.isfinite(alpha), alpha * ratio_a, 0.0)
    beta_term = np.where(np.isfinite(beta), beta * ratio_b, 0.0)

    mean = np.clip(mu + sd * (ratio_a - ratio_b), a, b)
    variance = var * (1 + alpha_term - beta_term - (ratio_a - ratio_b) ** 2)
    return mean, np.clip(variance, 0.0, var)


def trunc_normal_mean(
    mu: npt.ArrayLike, var: npt.ArrayLike, a: npt.ArrayLike, b: npt.ArrayLike
) -> npt.NDArray[np.float64]:
    return trunc_normal_moments(mu, var, a, b)[0]


def g_in(
    r: npt.ArrayLike, nu_r: npt.ArrayLike, prior: GaussianMessage
) -> tuple[npt.NDArray[np.complex128], npt.NDArray[np.float64]]:
    """
    Input estimation function for a Gaussian prior.

    Returns the posterior mean of x under prior CN(mu, nu) and pseudo
    observation CN(r, nu_r), together with nu / (nu + nu_r), the derivative
    with respect to r. An infinite prior variance passes r through.
    """
    r = np.asarray(r, dtype=np.complex128)
    nu_r = np.asarray(nu_r, dtype=np.float64)
    pv = prior.var
    if np.any((pv == 0) & (nu_r == 0)):
        raise DomainError("Prior and pseudo-observation are both point masses")
    with np.errstate(invalid="ignore", divide="ignore"):
        gain = np.where(np.isinf(pv), 1.0, pv / (pv + nu_r))
    return prior.mean + gain * (r - prior.mean), gain


def pdq_noise_var(noise_var: float, spec: QuantizerSpec) -> float:
    """
    Variance of the linearised observation (1 - rho) z + noise.
    """
    rho = resolve_rho(spec)
    return (1 - rho) * noise_var + rho * (1 - rho) * spec.input_power


def _g_out_gaussian(p, nu_p, y, gain, noise):
    # y = gain * z + CN(0, noise)
    denom = gain**2 + nu_p * noise
    value = (gain**2 * p - nu_p * gain * y) / denom
    return value, gain**2 / denom


def _g_out_uniform(p, nu_p, y, noise_var, spec):
    # Each axis of z + n has prior N(Re p / nu_p, v); the code fixes its cell.
    v = (noise_var + 1.0 / nu_p) / 2
    shrink = 1.0 + noise_var * nu_p
    lo_re, hi_re = thresholds(y.real, spec)
    lo_im, hi_im = thresholds(y.imag, spec)
    mean_re, var_re = trunc_normal_moments(p.real / nu_p, v, lo_re, hi_re)
    mean_im, var_im = trunc_normal_moments(p.imag / nu_p, v, lo_im, hi_im)
    value = (p - nu_p * (mean_re + 1j * mean_im)) / shrink
    derivative = (1 - (var_re + var_im) / (2 * v)) / shrink
    return value, derivative


def g_out(
    p: npt.ArrayLike,
    nu_p: npt.ArrayLike,
    y: npt.ArrayLike,
    noise_var: float,
    spec: QuantizerSpec,
) -> tuple[npt.NDArray[np.complex128], npt.NDArray[np.float64]]:
    """
    Output estimation function g_s and its derivative.

    Parameters
    ----------
    p: array_like
        Precision-scaled predictions; z has prior CN(p / nu_p, 1 / nu_p).
    nu_p: array_like
        Prediction precisions, strictly positive.
    y: array_like
        Observations in the form `adc` produces for `spec`.
    noise_var: float
        Complex noise variance.
    spec: QuantizerSpec
        ADC model.

    Returns
    -------
    value: np.ndarray
        p - nu_p E[z | y].
    derivative: np.ndarray
        d value / d p, averaged over the real and imaginary axes.
    """
    p = np.asarray(p, dtype=np.complex128)
    nu_p = np.asarray(nu_p, dtype=np.float64)
    y = np.asarray(y, dtype=np.complex128)
    if np.any(~(nu_p > 0)):
        raise DomainError("Prediction precisions must be positive")
    match spec.mode:
        case QuantMode.NONE:
            return _g_out_gaussian(p, nu_p, y, 1.0, noise_var)
        case QuantMode.PDQ:
            gain = 1 - resolve_rho(spec)
            return _g_out_gaussian(
                p, nu_p, y, gain, pdq_noise_var(noise_var, spec)
            )
        case QuantMode.UNIFORM:
            return _g_out_uniform(p, nu_p, y, noise_var, spec)


# dg below this is treated as an output that carries no information
_DG_FLOOR = 1e-12


def linearize_output(
    p: npt.ArrayLike,
    nu_p: npt.ArrayLike,
    y: npt.ArrayLike,
    noise_var: float,
    spec: QuantizerSpec,
) -> tuple[npt.NDArray[np.complex128], npt.NDArray[np.float64]]:
    """
    Gaussian-equivalent observation of z at the operating point (p, nu_p).

    Returns (y_lin, w_lin) such that the channel y_lin = z + CN(0, w_lin)
    has the same `g_out` value and derivative at (p, nu_p). For the
    unquantized and PDQ modes the pair is exact and does not depend on the
    operating point.
    """
    y = np.asarray(y, dtype=np.complex128)
    match spec.mode:
        case QuantMode.NONE:
            return y, np.full(y.shape, float(noise_var))
        case QuantMode.PDQ:
            gain = 1 - resolve_rho(spec)
            return y / gain, np.full(y.shape, pdq_noise_var(noise_var, spec) / gain**2)
        case QuantMode.UNIFORM:
            p = np.asarray(p, dtype=np.complex128)
            nu_p = np.asarray(nu_p, dtype=np.float64)
            value, derivative = g_out(p, nu_p, y, noise_var, spec)
            dg = np.clip(derivative, _DG_FLOOR, 1.0)
            return (p - value / dg) / nu_p, (1 / dg - 1) / nu_p

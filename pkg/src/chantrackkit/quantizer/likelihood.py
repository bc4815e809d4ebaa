# Dependencies
import numpy as np
import numpy.typing as npt
from scipy.special import log_ndtr, ndtr

# Top-Level Imports
from chantrackkit.data_classes import QuantizerSpec, QuantMode
from chantrackkit._errors import QuantizerError

# Relative Imports
from .adc import resolve_rho, thresholds


def phi(x: npt.ArrayLike) -> npt.NDArray[np.float64]:
    """Standard normal CDF."""
    return ndtr(x)


def log_phi(x: npt.ArrayLike) -> npt.NDArray[np.float64]:
    """Logarithm of the standard normal CDF, accurate deep in the left tail."""
    return log_ndtr(x)


def _log1mexp(x: npt.NDArray) -> npt.NDArray:
    # log(1 - exp(x)) for x <= 0
    with np.errstate(divide="ignore"):
        return np.where(
            x > -np.log(2), np.log(-np.expm1(x)), np.log1p(-np.exp(x))
        )


def log_phi_diff(a: npt.ArrayLike, b: npt.ArrayLike) -> npt.NDArray[np.float64]:
    """
    log(Phi(b) - Phi(a)) for a <= b, without cancellation when both sit in
    the same tail.

    Intervals in the right tail are reflected into the left tail, where
    log_ndtr keeps full relative precision.
    """
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    a, b = np.broadcast_arrays(a, b)
    flip = a > 0
    lo = np.where(flip, -b, a)
    hi = np.where(flip, -a, b)
    log_hi = log_ndtr(hi)
    log_lo = log_ndtr(lo)
    with np.errstate(invalid="ignore"):
        gap = np.where(np.isneginf(log_lo), -np.inf, log_lo - log_hi)
    return log_hi + _log1mexp(np.minimum(gap, 0.0))


def _check_codes(y: npt.NDArray, spec: QuantizerSpec) -> None:
    parts = np.concatenate([np.ravel(y.real), np.ravel(y.imag)])
    if np.any(parts != np.round(parts)) or np.any(
        (parts < spec.code_min) | (parts > spec.code_max)
    ):
        raise QuantizerError(
            "Uniform-mode observations must be integer codes in "
            f"[{spec.code_min}, {spec.code_max}]"
        )


def _axis_log_mass(
    code: npt.NDArray, mean: npt.NDArray, sd: float, spec: QuantizerSpec
) -> npt.NDArray:
    lower, upper = thresholds(code, spec)
    with np.errstate(divide="ignore", invalid="ignore"):
        return log_phi_diff((lower - mean) / sd, (upper - mean) / sd)


def _gaussian_log_density(y, mean, var) -> npt.NDArray:
    return -np.abs(y - mean) ** 2 / var - np.log(np.pi * var)


def log_likelihood(
    y: npt.ArrayLike,
    z: npt.ArrayLike,
    noise_var: float,
    spec: QuantizerSpec,
) -> npt.NDArray[np.float64]:
    """
    Element-wise log p(y | z) of the observation model.

    Parameters
    ----------
    y: array_like
        Observations in the form `adc` produces for `spec`.
    z: array_like
        Noiseless complex values B h.
    noise_var: float
        Complex noise variance sigma_n^2.
    spec: QuantizerSpec
        ADC model.

    Notes
    -----
    "none" and "pdq" are complex Gaussian densities; "uniform" is the
    probability mass of the observed cell with per-axis variance
    sigma_n^2 / 2.
    """
    y = np.asarray(y, dtype=np.complex128)
    z = np.asarray(z, dtype=np.complex128)
    match spec.mode:
        case QuantMode.NONE:
            return _gaussian_log_density(y, z, noise_var)
        case QuantMode.PDQ:
            rho = resolve_rho(spec)
            var = (1 - rho) * noise_var + rho * (1 - rho) * spec.input_power
            return _gaussian_log_density(y, (1 - rho) * z, var)
        case QuantMode.UNIFORM:
            _check_codes(y, spec)
            sd = np.sqrt(noise_var / 2)
            return _axis_log_mass(y.real, z.real, sd, spec) + _axis_log_mass(
                y.imag, z.imag, sd, spec
            )


def likelihood(
    y: npt.ArrayLike,
    z: npt.ArrayLike,
    noise_var: float,
    spec: QuantizerSpec,
) -> npt.NDArray[np.float64]:
    return np.exp(log_likelihood(y, z, noise_var, spec))

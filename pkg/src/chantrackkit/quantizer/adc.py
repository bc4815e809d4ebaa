# Standard Libraries
from typing import Mapping, Optional

# Dependencies
import numpy as np
import numpy.typing as npt

# Top-Level Imports
from chantrackkit.data_classes import QuantizerSpec, QuantMode
from chantrackkit._errors import QuantizerError

# Bussgang distortion factors of a uniform quantizer at 1 to 6 bits.
DEFAULT_RHO: dict[int, float] = {
    1: 0.3634,
    2: 0.1175,
    3: 0.03454,
    4: 0.009497,
    5: 0.002499,
    6: 0.0006642,
}

# Full-scale range of the ADC in per-axis standard deviations.
LOADING_FACTOR = 3.0


def default_rho(bits: int, table: Optional[Mapping[int, float]] = None) -> float:
    """
    Distortion factor for a `bits`-bit quantizer, looked up in `table`
    (DEFAULT_RHO when omitted).
    """
    lookup = DEFAULT_RHO if table is None else table
    try:
        return float(lookup[bits])
    except KeyError:
        raise QuantizerError(
            f"No distortion factor configured for {bits} bits"
        ) from None


def resolve_rho(spec: QuantizerSpec) -> float:
    if spec.rho is not None:
        return spec.rho
    if spec.bits is None:
        raise QuantizerError(f"Quantizer mode {spec.mode} has no bits")
    return default_rho(spec.bits)


def loading_step(
    bits: int,
    signal_power: float,
    noise_var: float,
    loading: float = LOADING_FACTOR,
) -> float:
    """
    Step size that spreads the 2^bits cells over +/- `loading` per-axis
    standard deviations of the pre-ADC signal.

    Parameters
    ----------
    bits: int
        Quantizer resolution.
    signal_power: float
        Mean power of the noiseless complex signal per sample.
    noise_var: float
        Complex noise variance.
    loading: float, optional
        Loading factor. Default 3.
    """
    sigma_axis = np.sqrt((signal_power + noise_var) / 2)
    return float(2 * loading * sigma_axis / 2**bits)


def _quantize_axis(v: npt.NDArray, spec: QuantizerSpec) -> npt.NDArray:
    k = np.floor(v / spec.step + 0.5)
    return np.clip(k, spec.code_min, spec.code_max)


def quantize(
    x: npt.ArrayLike,
    spec: QuantizerSpec,
    rng: Optional[np.random.Generator] = None,
) -> npt.NDArray[np.complex128]:
    """
    Applies the ADC model of `spec` to complex samples.

    Parameters
    ----------
    x: array_like
        Complex pre-ADC samples.
    spec: QuantizerSpec
        ADC description.
    rng: np.random.Generator, optional
        Needed in pdq mode for the distortion noise.

    Returns
    -------
    out: np.ndarray
        "none": x unchanged. "uniform": codes k1 + j k2 with integer parts.
        "pdq": (1 - rho) x + n_q, n_q ~ CN(0, rho (1 - rho) input_power).
    """
    x = np.asarray(x, dtype=np.complex128)
    if np.any(np.isnan(x)):
        raise QuantizerError("Cannot quantize NaN samples")
    match spec.mode:
        case QuantMode.NONE:
            return x
        case QuantMode.UNIFORM:
            return _quantize_axis(x.real, spec) + 1j * _quantize_axis(
                x.imag, spec
            )
        case QuantMode.PDQ:
            if rng is None:
                raise QuantizerError("pdq quantization needs a generator")
            rho = resolve_rho(spec)
            scale = np.sqrt(rho * (1 - rho) * spec.input_power / 2)
            n_q = scale * (
                rng.standard_normal(x.shape) + 1j * rng.standard_normal(x.shape)
            )
            return (1 - rho) * x + n_q


def thresholds(
    k: npt.ArrayLike, spec: QuantizerSpec
) -> tuple[npt.NDArray[np.float64], npt.NDArray[np.float64]]:
    """
    Lower and upper edges of the cells of integer codes `k`.

    The lowest code extends to -inf and the highest to +inf; all other
    cells are [(k - 1/2) step, (k + 1/2) step).
    """
    if spec.mode == QuantMode.NONE:
        raise QuantizerError("A pass-through ADC has no cells")
    k = np.asarray(k, dtype=np.float64)
    if np.any(k != np.round(k)) or np.any(
        (k < spec.code_min) | (k > spec.code_max)
    ):
        raise QuantizerError(
            f"Codes must be integers in [{spec.code_min}, {spec.code_max}]"
        )
    lower = np.where(k == spec.code_min, -np.inf, (k - 0.5) * spec.step)
    upper = np.where(k == spec.code_max, np.inf, (k + 0.5) * spec.step)
    return lower, upper


def dequantize(
    codes: npt.ArrayLike, spec: QuantizerSpec
) -> npt.NDArray[np.complex128]:
    """
    Representative value step (k1 + j k2) of each code.
    """
    return spec.step * np.asarray(codes, dtype=np.complex128)


def adc(x: npt.ArrayLike, spec: QuantizerSpec) -> npt.NDArray[np.complex128]:
    """
    Simulation front end.

    Both quantized modes run the physical uniform quantizer; pdq differs
    only in how inference reads the result, so it receives the de-quantized
    values while uniform receives the raw codes.
    """
    if spec.mode == QuantMode.NONE:
        return quantize(x, spec)
    codes = quantize(x, QuantizerSpec.uniform(spec.bits, spec.step))
    if spec.mode == QuantMode.PDQ:
        return dequantize(codes, spec)
    return codes

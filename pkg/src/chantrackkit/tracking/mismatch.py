# Standard Libraries
from collections import deque
import logging

# Dependencies
import numpy as np
import numpy.typing as npt

# Top-Level Imports
from chantrackkit.data_classes import GaussianMessage, QuantizerSpec, QuantMode
from chantrackkit._errors import DomainError
from chantrackkit.gamp import pdq_noise_var
from chantrackkit.quantizer import dequantize, resolve_rho

logger = logging.getLogger(__name__)


def _linearised_model(
    y: npt.NDArray, noise_var: float, spec: QuantizerSpec
) -> tuple[npt.NDArray[np.complex128], float, float]:
    # (numeric observation, gain on D^H w, effective noise variance)
    match spec.mode:
        case QuantMode.NONE:
            return y, 1.0, noise_var
        case QuantMode.UNIFORM:
            return dequantize(y, spec), 1.0, noise_var + spec.step**2 / 6
        case QuantMode.PDQ:
            return y, 1 - resolve_rho(spec), pdq_noise_var(noise_var, spec)


def normalized_innovation(
    y: npt.ArrayLike,
    A: npt.NDArray,
    predicted: GaussianMessage,
    spec: QuantizerSpec,
    noise_var: float,
) -> float:
    """
    Innovation energy of one block relative to its expectation under the
    learned model. Close to 1 on-model.

    Parameters
    ----------
    y: array_like
        Observations of the block.
    A: np.ndarray
        Measurement matrix D^H.
    predicted: GaussianMessage
        Prior of the block before its observations are used.
    spec: QuantizerSpec
        ADC model; quantized modes are read through their linearisation.
    noise_var: float
        Complex noise variance.
    """
    y_num, gain, noise = _linearised_model(
        np.asarray(y, dtype=np.complex128), noise_var, spec
    )
    residual = y_num - gain * (A @ predicted.mean)
    expected = np.sum(
        gain**2 * (np.abs(A) ** 2 @ predicted.var) + noise
    )
    return float(np.sum(np.abs(residual) ** 2) / expected)


class MismatchDetector:
    """
    Raises the relearning trigger when the mean normalized innovation over
    the last `window` blocks exceeds `threshold`. The history is cleared
    after each trigger.
    """

    def __init__(self, window: int = 5, threshold: float = 3.0):
        if window < 1:
            raise DomainError(f"window must be at least 1 ({window})")
        if not threshold > 1:
            raise DomainError(f"threshold must exceed 1 ({threshold})")
        self.window = window
        self.threshold = threshold
        self._recent: deque[float] = deque(maxlen=window)

    def update(self, statistic: float) -> bool:
        self._recent.append(statistic)
        if len(self._recent) < self.window:
            return False
        if np.mean(self._recent) > self.threshold:
            logger.debug("Innovation window mean above %.3g", self.threshold)
            self._recent.clear()
            return True
        return False

    def reset(self) -> None:
        self._recent.clear()


def mismatch_detect(
    detector: MismatchDetector,
    y: npt.ArrayLike,
    A: npt.NDArray,
    predicted: GaussianMessage,
    spec: QuantizerSpec,
    noise_var: float,
) -> bool:
    return detector.update(
        normalized_innovation(y, A, predicted, spec, noise_var)
    )

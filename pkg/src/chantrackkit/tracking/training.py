# Dependencies
import numpy as np
import numpy.typing as npt

# Top-Level Imports
from chantrackkit.data_classes import QuantizerSpec
from chantrackkit._errors import DimensionError, DomainError
from chantrackkit.channel import complex_normal, random_unitary_dft
from chantrackkit.quantizer import adc


class ReducedTraining:
    """
    Pilot rows for tracking on a known support.

    Parameters
    ----------
    D: np.ndarray
        |O| x P_T matrix of orthogonal rows, D D^H = (pilot_power / P_T) I.
    pilot_power: float
        Total pilot power sigma_p^2.
    """

    def __init__(self, D: npt.NDArray, pilot_power: float):
        self.D = np.asarray(D, dtype=np.complex128)
        self.pilot_power = float(pilot_power)
        self._validate()

    @property
    def num_support(self) -> int:
        return self.D.shape[0]

    @property
    def num_pilots(self) -> int:
        return self.D.shape[1]

    @property
    def measurement(self) -> npt.NDArray[np.complex128]:
        """D^H, mapping the reduced channel to the P_T pilot outputs."""
        return self.D.conj().T

    def gram_residual(self) -> float:
        K, P = self.D.shape
        gram = self.D @ self.D.conj().T
        return float(np.linalg.norm(gram - (self.pilot_power / P) * np.eye(K)))

    def _validate(self):
        if self.D.ndim != 2:
            raise DimensionError(f"D must be 2D ({self.D.ndim} dims)")
        if self.pilot_power <= 0:
            raise DomainError(f"Pilot power must be positive ({self.pilot_power})")


def build_reduced_training(
    num_support: int,
    num_pilots: int,
    pilot_power: float,
    rng: np.random.Generator,
) -> ReducedTraining:
    """
    First `num_support` rows of a phase-rotated P_T x P_T DFT matrix scaled
    to `pilot_power`.
    """
    if not 1 <= num_support <= num_pilots:
        raise DimensionError(
            f"Need 1 <= |O| <= P_T ({num_support=}, {num_pilots=})"
        )
    T_g = random_unitary_dft(num_pilots, rng) * np.sqrt(pilot_power / num_pilots)
    return ReducedTraining(T_g[:num_support], pilot_power)


def simulate_tracking_observation(
    w: npt.ArrayLike,
    training: ReducedTraining,
    noise_var: float,
    spec: QuantizerSpec,
    rng: np.random.Generator,
) -> npt.NDArray[np.complex128]:
    """
    ADC output of D^H w + n with n ~ CN(0, noise_var I).
    """
    w = np.asarray(w, dtype=np.complex128)
    if w.shape != (training.num_support,):
        raise DimensionError(
            f"Reduced channel shape {w.shape} does not match "
            f"{training.num_support} support rows"
        )
    noise = complex_normal(np.full(training.num_pilots, noise_var), rng)
    return adc(training.measurement @ w + noise, spec)

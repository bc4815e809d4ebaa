# Dependencies
import numpy as np
import numpy.typing as npt

# Top-Level Imports
from chantrackkit.data_classes import (
    PathObservations,
    QuantizerSpec,
    TrainingMatrix,
    VirtualChannelPath,
)
from chantrackkit._errors import DimensionError
from chantrackkit.quantizer import adc

# Relative Imports
from .geometry import dft_matrix, from_virtual
from .generators import complex_normal


def random_unitary_dft(N: int, rng: np.random.Generator) -> npt.NDArray:
    """
    N x N DFT matrix with every row rotated by an independent random phase.
    """
    phases = np.exp(1j * rng.uniform(0, 2 * np.pi, N))
    return phases[:, None] * dft_matrix(N)


def make_training_matrix(
    N: int, P: int, pilot_power: float, rng: np.random.Generator
) -> TrainingMatrix:
    """
    Orthogonal pilot block with X^H X = (pilot_power / P) I_P.

    Parameters
    ----------
    N: int
        Number of base-station antennas.
    P: int
        Pilot length, 1 <= P <= N.
    pilot_power: float
        Total pilot power sigma_p^2.
    rng: np.random.Generator
        Chooses the phase rotation and the P columns.
    """
    if not 1 <= P <= N:
        raise DimensionError(f"Need 1 <= P <= N for orthogonal pilots ({P=}, {N=})")
    U = random_unitary_dft(N, rng)
    columns = rng.choice(N, size=P, replace=False)
    return TrainingMatrix(U[:, columns] * np.sqrt(pilot_power / P), pilot_power)


def measurement_matrix(training: TrainingMatrix) -> npt.NDArray[np.complex128]:
    """
    B = X^T F_N^H, mapping the virtual channel to the P pilot outputs.
    """
    return from_virtual(training.X).T


def observe_block(
    h_tilde: npt.ArrayLike,
    training: TrainingMatrix,
    noise_var: float,
    rng: np.random.Generator,
) -> tuple[npt.NDArray[np.complex128], npt.NDArray[np.complex128]]:
    """
    Pre-ADC training signal of one block.

    Returns
    -------
    q: np.ndarray
        B h_tilde + n with n ~ CN(0, noise_var I_P).
    B: np.ndarray
        The P x N measurement matrix used.
    """
    h_tilde = np.asarray(h_tilde, dtype=np.complex128)
    if h_tilde.shape != (training.X.shape[0],):
        raise DimensionError(
            f"Channel shape {h_tilde.shape} does not match training matrix "
            f"{training.X.shape}"
        )
    B = measurement_matrix(training)
    noise = complex_normal(np.full(training.num_pilots, noise_var), rng)
    return B @ h_tilde + noise, B


def observe_path(
    path: VirtualChannelPath,
    num_pilots: int,
    pilot_power: float,
    noise_var: float,
    quantizer: QuantizerSpec,
    rng: np.random.Generator,
) -> PathObservations:
    """
    Draws an independent pilot block for every block of `path`, observes it
    and passes the result through the ADC.
    """
    N, M = path.values.shape
    y = np.empty((M, num_pilots), dtype=np.complex128)
    B = np.empty((M, num_pilots, N), dtype=np.complex128)
    for m in range(M):
        training = make_training_matrix(N, num_pilots, pilot_power, rng)
        q, B[m] = observe_block(path.block(m), training, noise_var, rng)
        y[m] = adc(q, quantizer)
    return PathObservations(y, B, noise_var, quantizer)

# Dependencies
import numpy as np
import numpy.typing as npt
import scipy.fft

# Top-Level Imports
from chantrackkit.data_classes import ArrayGeometry
from chantrackkit._errors import DomainError

# Slack on the angle window so that +/- pi/2 computed in floating point passes.
_ANGLE_TOL = 1e-12


def steering_vector(
    theta: float, geom: ArrayGeometry
) -> npt.NDArray[np.complex128]:
    """
    Array response of a uniform linear array.

    Parameters
    ----------
    theta: float
        Emergence angle in radians, inside [-pi/2, pi/2].
    geom: ArrayGeometry
        Array description.

    Returns
    -------
    a: np.ndarray
        Length-N vector with element n equal to
        exp(j 2 pi n (d/lambda) sin(theta)).
    """
    if not abs(theta) <= np.pi / 2 + _ANGLE_TOL:
        raise DomainError(f"Angle outside [-pi/2, pi/2] ({theta})")
    n = np.arange(geom.num_antennas)
    phase = 2 * np.pi * geom.spacing_over_wavelength * np.sin(theta)
    return np.exp(1j * phase * n)


def to_virtual(h: npt.ArrayLike) -> npt.NDArray[np.complex128]:
    """
    Normalised DFT along the antenna axis (axis 0), F_N h.
    """
    return scipy.fft.fft(np.asarray(h, dtype=np.complex128), axis=0, norm="ortho")


def from_virtual(h_tilde: npt.ArrayLike) -> npt.NDArray[np.complex128]:
    """
    Inverse of `to_virtual`, F_N^H h_tilde.
    """
    return scipy.fft.ifft(
        np.asarray(h_tilde, dtype=np.complex128), axis=0, norm="ortho"
    )


def dft_matrix(N: int) -> npt.NDArray[np.complex128]:
    """
    Unitary N x N DFT matrix with entries exp(-j 2 pi i k / N) / sqrt(N).
    """
    return to_virtual(np.eye(N))

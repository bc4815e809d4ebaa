# Standard Libraries
import math
from typing import Optional

# Dependencies
import numpy as np
import numpy.typing as npt

# Top-Level Imports
from chantrackkit.data_classes import (
    ArrayGeometry,
    ModelParams,
    RayChannelSpec,
    VirtualChannelPath,
)
from chantrackkit._errors import DimensionError, DomainError

# Relative Imports
from .geometry import steering_vector, to_virtual

# Rows of a physical channel whose mean power is below this fraction of the
# strongest row are not counted in its support.
PHYSICAL_SUPPORT_FRACTION = 1e-2


def complex_normal(
    var: npt.ArrayLike, rng: np.random.Generator, size=None
) -> npt.NDArray[np.complex128]:
    """
    Circularly-symmetric complex Gaussian draws CN(0, var).
    """
    var = np.asarray(var, dtype=np.float64)
    shape = var.shape if size is None else size
    scale = np.sqrt(var / 2)
    return scale * (rng.standard_normal(shape) + 1j * rng.standard_normal(shape))


def gen_ray_channel(
    spec: RayChannelSpec,
    geom: ArrayGeometry,
    rng: np.random.Generator,
    gains: Optional[npt.ArrayLike] = None,
) -> npt.NDArray[np.complex128]:
    """
    Antenna-domain channel from a discretised angle-Doppler scattering
    function.

    Parameters
    ----------
    spec: RayChannelSpec
        Angle window, ray count, Doppler and block timing.
    geom: ArrayGeometry
        Base-station array.
    rng: np.random.Generator
        Source of the ray angles, gains and Doppler phases.
    gains: array_like, optional
        Fixed complex ray gains. Drawn CN(0, 1/num_rays) when omitted.

    Returns
    -------
    h: np.ndarray
        N x M complex matrix. Column m (0-based) is
        sum_r a(theta_r) g_r exp(j 2 pi nu_r m L T_s).
    """
    R = spec.num_rays
    thetas = rng.uniform(spec.theta_min, spec.theta_max, R)
    if gains is None:
        g = complex_normal(np.full(R, 1.0 / R), rng)
    else:
        g = np.asarray(gains, dtype=np.complex128)
        if g.shape != (R,):
            raise DimensionError(
                f"Expected {R} ray gains, got shape {g.shape}"
            )
    nu = spec.doppler_max * np.cos(rng.uniform(0, 2 * np.pi, R))

    A = np.stack([steering_vector(t, geom) for t in thetas], axis=1)
    m = np.arange(spec.num_blocks)
    doppler = np.exp(1j * 2 * np.pi * np.outer(nu, m) * spec.block_duration)
    return A @ (g[:, None] * doppler)


def gen_physical_path(
    spec: RayChannelSpec, geom: ArrayGeometry, rng: np.random.Generator
) -> tuple[VirtualChannelPath, npt.NDArray[np.float64]]:
    """
    Ray-based channel taken to the virtual domain.

    Returns the path and its empirical per-row power, which stands in for
    the true lambda when scoring a learner on this model.
    """
    h_tilde = to_virtual(gen_ray_channel(spec, geom, rng))
    row_power = np.mean(np.abs(h_tilde) ** 2, axis=1)
    support = np.flatnonzero(
        row_power >= PHYSICAL_SUPPORT_FRACTION * row_power.max()
    )
    return VirtualChannelPath(h_tilde, support), row_power


def draw_initial(
    params: ModelParams, rng: np.random.Generator
) -> npt.NDArray[np.complex128]:
    return complex_normal(params.lam, rng)


def ar_evolve(
    h_prev: npt.ArrayLike, params: ModelParams, rng: np.random.Generator
) -> npt.NDArray[np.complex128]:
    """
    One step of h_m = alpha h_{m-1} + sqrt(1 - alpha^2) u, u ~ CN(0, Lambda).
    """
    if not 0 <= params.alpha <= 1:
        raise DomainError(f"alpha must lie in [0, 1] ({params.alpha})")
    h_prev = np.asarray(h_prev, dtype=np.complex128)
    if h_prev.shape != params.lam.shape:
        raise DimensionError(
            f"Channel length {h_prev.shape} does not match lambda "
            f"{params.lam.shape}"
        )
    innovation = complex_normal(params.lam, rng)
    return params.alpha * h_prev + np.sqrt(1 - params.alpha**2) * innovation


def default_support_width(N: int, angle_spread_deg: float = 4.0) -> int:
    """
    Number of virtual-channel bins spanned by an angular spread, at least 1.
    """
    return max(1, math.ceil(N * angle_spread_deg / 180))


def make_sparse_params(
    N: int, width: int, alpha: float, rng: np.random.Generator
) -> ModelParams:
    """
    Contiguous support of `width` bins at a random offset with lambda drawn
    uniformly from [0.5, 1.5]; zero elsewhere.
    """
    if not 1 <= width <= N:
        raise DomainError(f"Support width {width} outside [1, {N}]")
    offset = rng.integers(0, N - width + 1)
    lam = np.zeros(N)
    lam[offset : offset + width] = rng.uniform(0.5, 1.5, width)
    return ModelParams(alpha, lam)


def gen_sparse_path(
    params: ModelParams, num_blocks: int, rng: np.random.Generator
) -> VirtualChannelPath:
    """
    Model-matched virtual channel: stationary AR(1) under `params`.
    """
    values = np.empty((params.num_antennas, num_blocks), dtype=np.complex128)
    values[:, 0] = draw_initial(params, rng)
    for m in range(1, num_blocks):
        values[:, m] = ar_evolve(values[:, m - 1], params, rng)
    return VirtualChannelPath(values, params.support)

# Standard Libraries
from functools import cache

# Dependencies
import astropy.units as u
from astropy.constants import c
from astropy.units import Quantity
import numpy as np
from scipy.optimize import brentq
from scipy.special import j0

# Top-Level Imports
from chantrackkit.data_classes import ALPHA_MAX
from chantrackkit._errors import DomainError

DEFAULT_CARRIER = 2 * u.GHz
CALIBRATION_SPEED = 200 * u.km / u.hour
CALIBRATION_ALPHA = 0.9899

# First zero of J0.
_J0_FIRST_ZERO = 2.404825557695773


def _as_quantity(value: Quantity | float, unit: u.UnitBase) -> Quantity:
    if isinstance(value, Quantity):
        return value.to(unit)
    return value * unit


def doppler_shift(
    velocity: Quantity | float, carrier: Quantity | float = DEFAULT_CARRIER
) -> Quantity:
    """
    Maximum Doppler shift v f_c / c. Plain floats are read as m/s and Hz.
    """
    v = _as_quantity(velocity, u.m / u.s)
    if v.value < 0:
        raise DomainError(f"Velocity must be non-negative ({v})")
    fc = _as_quantity(carrier, u.Hz)
    return (v * fc / c).to(u.Hz)


@cache
def default_block_duration() -> Quantity:
    """
    Block duration at which a 200 km/h user on a 2 GHz carrier has an AR
    coefficient of 0.9899 under the Jakes autocorrelation.
    """
    f_d = doppler_shift(CALIBRATION_SPEED, DEFAULT_CARRIER).value
    upper = _J0_FIRST_ZERO / (2 * np.pi * f_d)
    T = brentq(
        lambda t: j0(2 * np.pi * f_d * t) - CALIBRATION_ALPHA, 0.0, upper
    )
    return T * u.s


def velocity_to_alpha(
    velocity: Quantity | float,
    carrier: Quantity | float = DEFAULT_CARRIER,
    block_duration: Quantity | float | None = None,
) -> float:
    """
    AR coefficient of a user moving at `velocity`.

    Parameters
    ----------
    velocity: Quantity or float
        User speed (m/s when given as a float).
    carrier: Quantity or float, optional
        Carrier frequency (Hz when given as a float). Default 2 GHz.
    block_duration: Quantity or float, optional
        Duration of a coherence block (s when given as a float). Defaults to
        the calibrated value of `default_block_duration`.

    Returns
    -------
    alpha: float
        J0(2 pi f_D T) clamped to [0, ALPHA_MAX].
    """
    f_d = doppler_shift(velocity, carrier)
    if block_duration is None:
        T = default_block_duration()
    else:
        T = _as_quantity(block_duration, u.s)
    alpha = float(j0(2 * np.pi * (f_d * T).to(u.dimensionless_unscaled).value))
    return float(np.clip(alpha, 0.0, ALPHA_MAX))

from .adc import (
    DEFAULT_RHO,
    LOADING_FACTOR,
    default_rho,
    resolve_rho,
    loading_step,
    quantize,
    thresholds,
    dequantize,
    adc,
)
from .likelihood import phi, log_phi, log_phi_diff, likelihood, log_likelihood

__all__ = [
    "DEFAULT_RHO",
    "LOADING_FACTOR",
    "default_rho",
    "resolve_rho",
    "loading_step",
    "quantize",
    "thresholds",
    "dequantize",
    "adc",
    "phi",
    "log_phi",
    "log_phi_diff",
    "likelihood",
    "log_likelihood",
]

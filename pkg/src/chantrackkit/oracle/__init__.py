"""
Brute-force references used by the test suite. Nothing in the inference
path imports this package.
"""

from .dense import (
    DenseGaussianPosterior,
    ar_prior_covariance,
    lmmse_posterior,
    exact_gaussian_posterior,
    forward_backward_smoother,
    kalman_filter_reduced,
)
from .quadrature import quadrature_gout, mc_trunc_moments
from .partition import exhaustive_two_means

__all__ = [
    "DenseGaussianPosterior",
    "ar_prior_covariance",
    "lmmse_posterior",
    "exact_gaussian_posterior",
    "forward_backward_smoother",
    "kalman_filter_reduced",
    "quadrature_gout",
    "mc_trunc_moments",
    "exhaustive_two_means",
]

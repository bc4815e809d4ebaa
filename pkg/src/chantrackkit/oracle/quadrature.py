# Dependencies
import numpy as np
from scipy.integrate import quad
from scipy.special import ndtr, ndtri
from scipy.stats import norm

# Top-Level Imports
from chantrackkit.data_classes import QuantizerSpec, QuantMode
from chantrackkit._errors import DomainError, NumericalError
from chantrackkit.quantizer import thresholds

# Integration window in prior standard deviations.
_SPAN = 12.0


def _axis_posterior_mean(
    mu: float, var_z: float, lo: float, hi: float, noise_sd: float
) -> float:
    # E[z | z + n in [lo, hi)] with z ~ N(mu, var_z), n ~ N(0, noise_sd^2)
    sd = np.sqrt(var_z)

    def cell_mass(x):
        return ndtr((hi - x) / noise_sd) - ndtr((lo - x) / noise_sd)

    a, b = mu - _SPAN * sd, mu + _SPAN * sd
    edges = [e for e in (lo, hi) if np.isfinite(e) and a < e < b]
    opts = dict(points=edges or None, limit=400, epsabs=0.0, epsrel=1e-12)
    Z, _ = quad(lambda x: norm.pdf(x, mu, sd) * cell_mass(x), a, b, **opts)
    if Z <= 0:
        raise NumericalError(
            "Quantization cell carries no mass",
            {"mu": mu, "var": var_z, "lo": lo, "hi": hi},
        )
    first, _ = quad(
        lambda x: x * norm.pdf(x, mu, sd) * cell_mass(x), a, b, **opts
    )
    return first / Z


def quadrature_gout(
    p: complex, nu_p: float, y: complex, noise_var: float, spec: QuantizerSpec
) -> complex:
    """
    p - nu_p E[z | y] for a uniform quantizer, with the posterior mean found
    by adaptive quadrature on each real axis.
    """
    if spec.mode != QuantMode.UNIFORM:
        raise DomainError("Quadrature reference is defined for uniform mode")
    var_z = 1.0 / (2 * nu_p)
    noise_sd = np.sqrt(noise_var / 2)
    lo_re, hi_re = (float(v) for v in thresholds(np.real(y), spec))
    lo_im, hi_im = (float(v) for v in thresholds(np.imag(y), spec))
    e_re = _axis_posterior_mean(p.real / nu_p, var_z, lo_re, hi_re, noise_sd)
    e_im = _axis_posterior_mean(p.imag / nu_p, var_z, lo_im, hi_im, noise_sd)
    return p - nu_p * (e_re + 1j * e_im)


def mc_trunc_moments(
    mu: float,
    var: float,
    a: float,
    b: float,
    n_samples: int,
    rng: np.random.Generator,
) -> tuple[float, float]:
    """
    Monte-Carlo mean of N(mu, var) truncated to [a, b] by inverse-CDF
    sampling, and its standard error.
    """
    if not a < b:
        raise DomainError(f"Empty interval [{a}, {b}]")
    sd = np.sqrt(var)
    alpha, beta = (a - mu) / sd, (b - mu) / sd
    # sample the reflected interval when it sits in the right tail
    flip = alpha > 0
    lo, hi = (-beta, -alpha) if flip else (alpha, beta)
    u_lo, u_hi = ndtr(lo), ndtr(hi)
    if not u_hi > u_lo:
        raise NumericalError(
            "Truncation interval has no representable mass",
            {"mu": mu, "var": var, "a": a, "b": b},
        )
    standard = ndtri(rng.uniform(u_lo, u_hi, n_samples))
    samples = mu + sd * (-standard if flip else standard)
    return float(samples.mean()), float(samples.std(ddof=1) / np.sqrt(n_samples))

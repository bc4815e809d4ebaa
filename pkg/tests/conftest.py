import numpy as np
import pytest

from chantrackkit.data_classes import ModelParams
from chantrackkit.channel import gen_sparse_path, observe_path
from chantrackkit.data_classes import QuantizerSpec


@pytest.fixture
def rng():
    return np.random.default_rng(42)


def dense_params(N, alpha, rng):
    """Every coefficient active, lambda ~ U[0.5, 1.5]."""
    return ModelParams(alpha, rng.uniform(0.5, 1.5, N))


def unquantized_observations(params, M, P, snr_db, rng):
    path = gen_sparse_path(params, M, rng)
    noise_var = P / 10 ** (snr_db / 10)
    obs = observe_path(path, P, P, noise_var, QuantizerSpec.none(), rng)
    return path, obs

import numpy as np
import pytest

from conftest import dense_params, unquantized_observations

from chantrackkit import ChannelEstimator, ProcessingFlag
from chantrackkit._errors import DimensionError
from chantrackkit.data_classes import EmConfig, PathObservations, QuantizerSpec
from chantrackkit.channel import (
    default_support_width,
    gen_sparse_path,
    make_sparse_params,
    observe_path,
)
from chantrackkit.tracking import ChannelTracker, build_reduced_training

FAST = EmConfig(max_em_iters=2, k_max=10)


@pytest.fixture
def estimator(rng):
    params = dense_params(8, 0.9, rng)
    _, obs = unquantized_observations(params, 4, 8, 20.0, rng)
    return ChannelEstimator(obs, FAST)


class TestChannelEstimator:
    def test_starts_raw(self, estimator):
        assert estimator._processing_flag is ProcessingFlag.RAW
        with pytest.raises(ValueError):
            estimator.params

    def test_tracker_needs_support(self, estimator, rng):
        with pytest.raises(ValueError):
            estimator.tracker(build_reduced_training(2, 4, 4.0, rng), 0.1)

    def test_detect_support_learns_first(self, estimator):
        support = estimator.detect_support()
        assert estimator._processing_flag is ProcessingFlag.SUPPORT_DETECTED
        assert estimator.result is not None
        assert estimator.detect_support() is support

    def test_relearning_clears_support(self, estimator):
        estimator.detect_support()
        estimator.learn()
        assert estimator._processing_flag is ProcessingFlag.LEARNED
        assert estimator.support is None

    def test_tracker(self, estimator, rng):
        support = estimator.detect_support()
        K = len(support)
        tracker = estimator.tracker(build_reduced_training(K, K + 2, K + 2.0, rng), 0.1)
        assert isinstance(tracker, ChannelTracker)
        assert tracker.spec == estimator.observations.quantizer
        np.testing.assert_array_equal(tracker.support, support.indices)
        with pytest.raises(DimensionError):
            estimator.tracker(build_reduced_training(K + 1, K + 2, K + 2.0, rng), 0.1)

    def test_needs_blocks(self):
        obs = PathObservations(
            np.zeros((0, 2)), np.zeros((0, 2, 4)), 0.1, QuantizerSpec.none()
        )
        with pytest.raises(DimensionError):
            ChannelEstimator(obs)


@pytest.mark.slow
def test_support_recovery():
    """True support recovered in at least 90% of 40 model-matched trials at 15 dB."""
    N, M, P = 32, 16, 8
    hits = 0
    for seed in range(40):
        rng = np.random.default_rng(seed)
        params = make_sparse_params(N, default_support_width(N), 0.99, rng)
        path = gen_sparse_path(params, M, rng)
        obs = observe_path(path, P, P, P / 10**1.5, QuantizerSpec.none(), rng)
        support = ChannelEstimator(obs).detect_support()
        hits += np.array_equal(support.indices, path.true_support)
    assert hits >= 36

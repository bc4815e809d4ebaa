# Dependencies
import numpy as np


def trial_rng(seed: int, point: int, trial: int) -> np.random.Generator:
    """
    Generator for one Monte-Carlo trial.

    The stream depends only on (seed, point, trial), so trial order and
    worker count never change results. Every quantizer setting evaluated at
    the same `point` sees the same channel and noise draws.

    Parameters
    ----------
    seed: int
        Master seed of the experiment.
    point: int
        Index of the sweep point (SNR value, bit count...).
    trial: int
        Trial index at that point.
    """
    sequence = np.random.SeedSequence(seed, spawn_key=(point, trial))
    return np.random.default_rng(sequence)

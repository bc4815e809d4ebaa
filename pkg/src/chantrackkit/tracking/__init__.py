from .training import (
    ReducedTraining,
    build_reduced_training,
    simulate_tracking_observation,
)
from .mismatch import MismatchDetector, normalized_innovation, mismatch_detect
from .tracker import (
    TrackState,
    TrackRecord,
    ChannelTracker,
    predict,
    track_step,
)

__all__ = [
    "ReducedTraining",
    "build_reduced_training",
    "simulate_tracking_observation",
    "MismatchDetector",
    "normalized_innovation",
    "mismatch_detect",
    "TrackState",
    "TrackRecord",
    "ChannelTracker",
    "predict",
    "track_step",
]

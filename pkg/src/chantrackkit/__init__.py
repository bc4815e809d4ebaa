"""
# chantrackkit

Learning and tracking of sparse, time-varying massive-MIMO channels seen
through low-resolution ADCs.
"""

from .estimator import ChannelEstimator, ProcessingFlag
from .data_classes import (
    ModelParams,
    QuantizerSpec,
    QuantMode,
    EmConfig,
    TrackingConfig,
    DampingConfig,
)
from .em import em_fit
from .gamp import gamp_solve
from .support import kmeans_support
from .tracking import ChannelTracker

__all__ = [
    "ChannelEstimator",
    "ProcessingFlag",
    "ModelParams",
    "QuantizerSpec",
    "QuantMode",
    "EmConfig",
    "TrackingConfig",
    "DampingConfig",
    "em_fit",
    "gamp_solve",
    "kmeans_support",
    "ChannelTracker",
]

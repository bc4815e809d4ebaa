# Standard Libraries
from enum import Enum, auto
import logging
from typing import Optional

# Top-Level Imports
from chantrackkit.data_classes import (
    EmConfig,
    ModelParams,
    PathObservations,
    QuantizerSpec,
    TrackingConfig,
)
from chantrackkit._errors import DimensionError
from chantrackkit.em import EmResult, em_fit
from chantrackkit.support import SupportSet, kmeans_support
from chantrackkit.tracking import ChannelTracker, ReducedTraining

logger = logging.getLogger(__name__)


class ProcessingFlag(Enum):
    RAW = auto()
    LEARNED = auto()
    SUPPORT_DETECTED = auto()


class ChannelEstimator:
    """
    Main class for learning a sparse time-varying channel from a run of
    pilot blocks and handing it over to an online tracker.

    Parameters
    ----------
    observations: PathObservations
        ADC outputs and measurement matrices of the learning blocks.
    config: EmConfig, optional
        EM, fixed-point and GAMP settings.

    Notes
    -----
    The workflow is learn -> detect_support -> tracker. Calling a later
    step runs the missing earlier ones with their defaults.
    """

    def __init__(
        self, observations: PathObservations, config: EmConfig = EmConfig()
    ):
        self.observations = observations
        self.config = config
        self.result: Optional[EmResult] = None
        self.support: Optional[SupportSet] = None

        self._processing_flag = ProcessingFlag.RAW

        self._validate()

    @property
    def params(self) -> ModelParams:
        if self.result is None:
            raise ValueError("Parameters have not been learned yet.")
        return self.result.params

    def learn(
        self,
        init: Optional[ModelParams] = None,
        truth: Optional[ModelParams] = None,
    ) -> EmResult:
        logger.info(
            "Learning channel statistics from %d blocks",
            self.observations.num_blocks,
        )
        self.result = em_fit(self.observations, self.config, init, truth)
        self.support = None
        self._processing_flag = ProcessingFlag.LEARNED
        return self.result

    def detect_support(self) -> SupportSet:
        if self._processing_flag == ProcessingFlag.SUPPORT_DETECTED:
            return self.support
        if self._processing_flag != ProcessingFlag.LEARNED:
            self.learn()
        self.support = kmeans_support(self.params.lam)
        logger.info("Detected %d support coefficients", len(self.support))
        self._processing_flag = ProcessingFlag.SUPPORT_DETECTED
        return self.support

    def tracker(
        self,
        training: ReducedTraining,
        noise_var: float,
        spec: Optional[QuantizerSpec] = None,
        config: TrackingConfig = TrackingConfig(),
    ) -> ChannelTracker:
        """
        Tracker on the detected support. `spec` defaults to the quantizer of
        the learning observations.
        """
        if self._processing_flag != ProcessingFlag.SUPPORT_DETECTED:
            raise ValueError("Support detection has not been performed yet.")
        if training.num_support != len(self.support):
            raise DimensionError(
                f"Training covers {training.num_support} coefficients but the "
                f"support has {len(self.support)}"
            )
        return ChannelTracker(
            self.params,
            self.support.indices,
            training,
            spec if spec is not None else self.observations.quantizer,
            noise_var,
            config,
        )

    def _validate(self):
        if self.observations.num_blocks < 1:
            raise DimensionError(
                "Observations hold no blocks "
                f"({self.observations.num_blocks})"
            )

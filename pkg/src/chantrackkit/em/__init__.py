from .messages import (
    BlockMessages,
    combine_time_prior,
    forward_message,
    backward_message,
    forward_pass,
    backward_pass,
    smoother_gain,
)
from .estep import PosteriorStats, EStepResult, compute_pi, e_step
from .mstep import (
    expected_log_prior,
    alpha_objective,
    alpha_cubic,
    m_step_lambda,
    m_step_alpha,
    fixed_point_update,
)
from .learner import EmResult, EmTraceRow, em_fit

__all__ = [
    "BlockMessages",
    "combine_time_prior",
    "forward_message",
    "backward_message",
    "forward_pass",
    "backward_pass",
    "smoother_gain",
    "PosteriorStats",
    "EStepResult",
    "compute_pi",
    "e_step",
    "expected_log_prior",
    "alpha_objective",
    "alpha_cubic",
    "m_step_lambda",
    "m_step_alpha",
    "fixed_point_update",
    "EmResult",
    "EmTraceRow",
    "em_fit",
]

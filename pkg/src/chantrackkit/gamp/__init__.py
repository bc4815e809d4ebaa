from .scalar import (
    trunc_normal_moments,
    trunc_normal_mean,
    g_in,
    g_out,
    linearize_output,
    pdq_noise_var,
)
from .core import GampState, init_state, lmmse_stage, gamp_block_update, gamp_solve

__all__ = [
    "trunc_normal_moments",
    "trunc_normal_mean",
    "g_in",
    "g_out",
    "linearize_output",
    "pdq_noise_var",
    "GampState",
    "init_state",
    "lmmse_stage",
    "gamp_block_update",
    "gamp_solve",
]

from .geometry import steering_vector, to_virtual, from_virtual, dft_matrix
from .generators import (
    complex_normal,
    gen_ray_channel,
    gen_physical_path,
    draw_initial,
    ar_evolve,
    default_support_width,
    make_sparse_params,
    gen_sparse_path,
)
from .training import (
    random_unitary_dft,
    make_training_matrix,
    measurement_matrix,
    observe_block,
    observe_path,
)
from .doppler import velocity_to_alpha, doppler_shift, default_block_duration
from .io import save_complex_table, load_complex_table

__all__ = [
    "steering_vector",
    "to_virtual",
    "from_virtual",
    "dft_matrix",
    "complex_normal",
    "gen_ray_channel",
    "gen_physical_path",
    "draw_initial",
    "ar_evolve",
    "default_support_width",
    "make_sparse_params",
    "gen_sparse_path",
    "random_unitary_dft",
    "make_training_matrix",
    "measurement_matrix",
    "observe_block",
    "observe_path",
    "velocity_to_alpha",
    "doppler_shift",
    "default_block_duration",
    "save_complex_table",
    "load_complex_table",
]

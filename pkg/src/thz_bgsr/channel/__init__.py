"""
Dual-wideband THz channel model.

Frequency-dependent steering vectors, spreading/absorption/reflection losses,
pulse-shaping delay coefficients and mixture-drawn angles combine into the
per-subcarrier multi-user channel H_MU[k].
"""

from thz_bgsr.channel.angles import (
    AngleMixture,
    UserAngles,
    circular_separation,
    draw_angles,
    draw_gmm_angles,
    draw_grid_angles,
    paths_per_user,
)
from thz_bgsr.channel.geometry import (
    effective_aoa,
    grid_cosines,
    steering_derivative,
    steering_matrix,
    steering_vector,
    subcarrier_frequencies,
    subcarrier_frequency,
)
from thz_bgsr.channel.losses import (
    SPEED_OF_LIGHT,
    AbsorptionTable,
    absorption_from_config,
    characteristic_impedance,
    free_space_loss,
    molecular_absorption_loss,
    rayleigh_roughness_factor,
    reflection_coefficient,
)
from thz_bgsr.channel.materials import OFFICE_MATERIALS, MaterialProps, load_materials
from thz_bgsr.channel.paths import PathComponent, PathKind, draw_paths
from thz_bgsr.channel.pulse import (
    PulseShape,
    pulse_shaping_coefficient,
    pulse_shaping_vector,
    rect_impulse,
    rrc_impulse,
)
from thz_bgsr.channel.synthesis import (
    MultiUserChannel,
    build_mu_cfr,
    channel_term,
    generate_channel,
    path_coefficients,
    path_gain,
    path_scale,
)

__all__ = [
    # Geometry
    "subcarrier_frequency",
    "subcarrier_frequencies",
    "effective_aoa",
    "grid_cosines",
    "steering_vector",
    "steering_matrix",
    "steering_derivative",
    # Losses
    "SPEED_OF_LIGHT",
    "AbsorptionTable",
    "absorption_from_config",
    "characteristic_impedance",
    "free_space_loss",
    "molecular_absorption_loss",
    "rayleigh_roughness_factor",
    "reflection_coefficient",
    # Materials
    "MaterialProps",
    "OFFICE_MATERIALS",
    "load_materials",
    # Pulse shaping
    "PulseShape",
    "pulse_shaping_coefficient",
    "pulse_shaping_vector",
    "rect_impulse",
    "rrc_impulse",
    # Angles and paths
    "AngleMixture",
    "UserAngles",
    "circular_separation",
    "draw_angles",
    "draw_gmm_angles",
    "draw_grid_angles",
    "paths_per_user",
    "PathComponent",
    "PathKind",
    "draw_paths",
    # Synthesis
    "MultiUserChannel",
    "build_mu_cfr",
    "channel_term",
    "generate_channel",
    "path_coefficients",
    "path_gain",
    "path_scale",
]

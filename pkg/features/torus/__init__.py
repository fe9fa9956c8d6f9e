"""Area-measure sampling on the curved torus."""

from features.torus.conditional import SliceCheckReport, conditional_slice_check, torus_phi_jacobian
from features.torus.models import TorusParams, TorusSample
from features.torus.sampler import (
    area_jacobian,
    mc_surface_area,
    rejection_theta,
    sample_torus_area,
    sample_torus_area_sharded,
    sample_torus_naive,
    theta_cdf,
    theta_density,
    torus_derivative,
    torus_embed,
    torus_surface_area,
)

__all__ = [
    "SliceCheckReport",
    "TorusParams",
    "TorusSample",
    "area_jacobian",
    "conditional_slice_check",
    "mc_surface_area",
    "rejection_theta",
    "sample_torus_area",
    "sample_torus_area_sharded",
    "sample_torus_naive",
    "theta_cdf",
    "theta_density",
    "torus_derivative",
    "torus_embed",
    "torus_surface_area",
    "torus_phi_jacobian",
]

"""Finite-state demonstration of the neighborhood-sampling bias."""

from features.pitfall.kernels import (
    PitfallReport,
    check_structure,
    detailed_balance_error,
    kernel_period,
    metropolized_neighborhood_kernel,
    neighborhood_kernel,
    path_system,
    random_system,
    stationary_distribution,
    verify_pitfall,
)
from features.pitfall.models import KernelMatrix, NeighborhoodSystem

__all__ = [
    "KernelMatrix",
    "NeighborhoodSystem",
    "PitfallReport",
    "check_structure",
    "detailed_balance_error",
    "kernel_period",
    "metropolized_neighborhood_kernel",
    "neighborhood_kernel",
    "path_system",
    "random_system",
    "stationary_distribution",
    "verify_pitfall",
]

"""Core shared infrastructure."""

from core.chain import ChainConfig, derive_rng
from core.errors import SamplingError
from core.geometry import (
    DerivativeMatrix,
    JacobianValue,
    gram_jacobian,
    metropolis_step,
)
from core.persistence import write_csv, write_json

__all__ = [
    "ChainConfig",
    "DerivativeMatrix",
    "JacobianValue",
    "SamplingError",
    "derive_rng",
    "gram_jacobian",
    "metropolis_step",
    "write_csv",
    "write_json",
]

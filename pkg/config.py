"""Centralized configuration for the manifold samplers."""

from __future__ import annotations

import os
from pathlib import Path

from dotenv import load_dotenv

PROJECT_ROOT = Path(__file__).resolve().parent
load_dotenv(PROJECT_ROOT / ".env")


def _float_env(key: str, default: float) -> float:
    """Parse env var as float; return default if missing or invalid."""
    v = os.getenv(key)
    if v is None:
        return default
    try:
        return float(v)
    except ValueError:
        return default


def _int_env(key: str, default: int) -> int:
    """Parse env var as int; return default if missing or invalid."""
    v = os.getenv(key)
    if v is None:
        return default
    try:
        return int(v)
    except ValueError:
        return default


# -----------------------------------------------------------------------------
# Jacobians
# Override via env: MS_TOL_DEGENERATE, MS_ORACLE_MAX_SIDE, ...
# -----------------------------------------------------------------------------
TOL_DEGENERATE = _float_env("MS_TOL_DEGENERATE", 1e-14)  # relative to Gram scale**k
ORACLE_MAX_SIDE = _int_env("MS_ORACLE_MAX_SIDE", 8)
ORACLE_MAX_MINORS = _int_env("MS_ORACLE_MAX_MINORS", 200_000)

# -----------------------------------------------------------------------------
# Gamma sum/product manifold
# -----------------------------------------------------------------------------
GAMMA_EPS_FRACTION = _float_env("MS_GAMMA_EPS_FRACTION", 0.05)  # eps = fraction * S/n
GAMMA_FOLD_TOL = _float_env("MS_GAMMA_FOLD_TOL", 1e-12)  # disc <= tol * t**2 is the fold

# -----------------------------------------------------------------------------
# Moment manifold
# -----------------------------------------------------------------------------
QUARTIC_ROOT_TOL = _float_env("MS_QUARTIC_ROOT_TOL", 1e-9)  # times max(1, |e|inf)
QUARTIC_CLUSTER_RADIUS = _float_env("MS_QUARTIC_CLUSTER_RADIUS", 5e-4)
QUARTIC_POLISH_STEPS = _int_env("MS_QUARTIC_POLISH_STEPS", 4)
QUARTIC_BOX_SLACK = _float_env("MS_QUARTIC_BOX_SLACK", 1e-12)
CURVE_RESIDUAL_TOL = _float_env("MS_CURVE_RESIDUAL_TOL", 1e-9)
MOMENT_RESYNC_EVERY = _int_env("MS_MOMENT_RESYNC_EVERY", 10_000)
INDEX_RETRY_CAP = _int_env("MS_INDEX_RETRY_CAP", 100)
DISTINCT_TOL = _float_env("MS_DISTINCT_TOL", 1e-9)
NEYMAN_DEFAULT_EPS = _float_env("MS_NEYMAN_DEFAULT_EPS", 0.05)

# -----------------------------------------------------------------------------
# Finite-state kernels
# -----------------------------------------------------------------------------
POWER_ITERATION_TOL = _float_env("MS_POWER_ITERATION_TOL", 1e-14)
POWER_ITERATION_MAX = _int_env("MS_POWER_ITERATION_MAX", 1_000_000)
STATIONARY_RESIDUAL_MAX = _float_env("MS_STATIONARY_RESIDUAL_MAX", 1e-12)

# -----------------------------------------------------------------------------
# Output
# -----------------------------------------------------------------------------
CSV_SIGNIFICANT_DIGITS = _int_env("MS_CSV_SIGNIFICANT_DIGITS", 17)

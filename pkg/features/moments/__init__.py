"""Sampling on the moment manifold for the Neyman smooth test."""

from features.moments.algebra import (
    QuarticSolution,
    RankDiagnostic,
    gram_moment_matrix,
    newton_to_elementary,
    power_sums,
    rank_diagnostic,
    solve_quartic_in_box,
    vandermonde_product,
)
from features.moments.chain import GraySubsets, NeymanChain, RandomSubsets, curve_move, neyman_chain_step
from features.moments.models import CurveMoveRecord, MomentState, NeymanModel
from features.moments.neyman import (
    legendre_statistic,
    neyman_density,
    neyman_psi_squared,
    neyman_smooth_gof,
    sample_neyman,
)

__all__ = [
    "CurveMoveRecord",
    "GraySubsets",
    "MomentState",
    "NeymanChain",
    "NeymanModel",
    "QuarticSolution",
    "RandomSubsets",
    "RankDiagnostic",
    "curve_move",
    "gram_moment_matrix",
    "legendre_statistic",
    "newton_to_elementary",
    "neyman_chain_step",
    "neyman_density",
    "neyman_psi_squared",
    "neyman_smooth_gof",
    "power_sums",
    "rank_diagnostic",
    "sample_neyman",
    "solve_quartic_in_box",
    "vandermonde_product",
]

"""Sampling on the manifold sum(x) = S, prod(x) = P."""

from features.gamma.chain import GammaMetropolisChain, GammaRecord
from features.gamma.chart import (
    chart_density,
    chart_derivative_matrix,
    chart_jacobian,
    chart_marginal_probabilities,
    data_chart_point,
    default_start,
    feasible_scaling_interval,
    gamma_conditional_logdensity,
    jacobian_sufficient_gamma,
    lift_to_manifold,
    numeric_chart_derivative,
    randomize_symmetry,
)
from features.gamma.gof import anderson_darling, fit_gamma_ml, gamma_gof_test, sum_squares
from features.gamma.models import ChartPoint, GammaConstraint

__all__ = [
    "ChartPoint",
    "GammaConstraint",
    "GammaMetropolisChain",
    "GammaRecord",
    "anderson_darling",
    "chart_density",
    "chart_derivative_matrix",
    "chart_jacobian",
    "chart_marginal_probabilities",
    "data_chart_point",
    "default_start",
    "feasible_scaling_interval",
    "fit_gamma_ml",
    "gamma_conditional_logdensity",
    "gamma_gof_test",
    "jacobian_sufficient_gamma",
    "lift_to_manifold",
    "numeric_chart_derivative",
    "randomize_symmetry",
    "sum_squares",
]

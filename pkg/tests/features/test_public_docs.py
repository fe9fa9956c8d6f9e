"""Public sampler and test entry points document their arguments."""

import importlib

import pytest


@pytest.mark.parametrize(
    "target",
    [
        "features.gamma.chart:lift_to_manifold",
        "features.gamma.chart:chart_marginal_probabilities",
        "features.gamma.gof:gamma_gof_test",
        "features.gamma.chain:GammaMetropolisChain.run",
        "features.moments.chain:curve_move",
        "features.moments.chain:accept_move",
        "features.moments.neyman:neyman_smooth_gof",
        "features.moments.algebra:solve_quartic_in_box",
        "features.pitfall.kernels:verify_pitfall",
        "features.torus.sampler:sample_torus_area",
        "features.validation.besag:besag_serial_test",
    ],
)
def test_entry_point_has_args_section(target):
    module_name, _, attr = target.partition(":")
    obj = importlib.import_module(module_name)
    for part in attr.split("."):
        obj = getattr(obj, part)
    assert obj.__doc__ and "Args:" in obj.__doc__

"""Tests for the calibration suites behind ``validate``."""

import pytest


@pytest.mark.parametrize("suite", ["jacobian", "moments", "pitfall"])
def test_deterministic_suites_pass(suite):
    from features.validation.calibration import run_calibration

    summary = run_calibration(suite, 20, seed=0)
    assert summary["passed"], summary
    assert list(summary["suites"]) == [suite]


def test_besag_suite_passes():
    from features.validation.calibration import run_calibration

    assert run_calibration("besag", 400, seed=1)["passed"]


def test_unknown_suite():
    from core.errors import InputError
    from features.validation.calibration import run_calibration

    with pytest.raises(InputError):
        run_calibration("nope", 5, seed=0)
    with pytest.raises(InputError):
        run_calibration("jacobian", 0, seed=0)


def test_torus_suite_reports_chi_square():
    from features.validation.calibration import torus_suite

    summary = torus_suite(20, seed=3)
    assert summary["passed"], summary
    assert summary["chi_square_pass_fraction"] >= 0.95


@pytest.mark.parametrize("ratio", [0.04, 0.25, 1.0, 4.0])
def test_scaled_block_pair_realizes_ratio(ratio):
    """The scaled block multiplies both targets by exactly the requested ratio."""
    import math

    from features.moments.chain import block_log_target
    from features.validation.calibration import scaled_block_pair

    x, y = scaled_block_pair(ratio)
    assert y.min() >= 0.0 and y.max() <= 1.0
    for rule in ("paper", "arclength"):
        realized = math.exp(block_log_target(y, 0, rule) - block_log_target(x, 0, rule))
        assert realized == pytest.approx(ratio, rel=1e-9)


def test_scaled_block_pair_rejects_bad_ratio():
    from core.errors import InputError
    from features.validation.calibration import scaled_block_pair

    with pytest.raises(InputError):
        scaled_block_pair(0.0)
    with pytest.raises(InputError):
        scaled_block_pair(1e-6)


def test_acceptance_suite_passes():
    from features.validation.calibration import ACCEPTANCE_RATIOS, acceptance_suite

    summary = acceptance_suite(10, seed=2)
    assert summary["passed"], summary
    assert summary["trials"] == 10_000
    for rule in ("paper", "arclength"):
        assert [row["ratio"] for row in summary[rule]] == list(ACCEPTANCE_RATIOS)
        assert summary[rule][-1]["frequency"] == 1.0


def test_gamma_suite_passes():
    """Chart histograms match quadrature in both modes and every state keeps S and P."""
    from features.validation.calibration import gamma_suite

    summary = gamma_suite(50, seed=4)
    assert summary["passed"], summary
    for mode in ("area", "conditional"):
        assert summary[mode]["tv"] < 0.05
        assert summary[mode]["max_sum_residual"] < 1e-8


def test_neyman_suite_small():
    """Arclength p-values fall into ten equal rank groups without rejection."""
    from features.validation.calibration import neyman_suite

    summary = neyman_suite(60, seed=5, n=10, B=9, T=20)
    assert summary["B"] == 9
    assert summary["passed"], summary


def test_rank_uniformity_needs_equal_groups():
    from core.errors import InputError
    from features.validation.calibration import _rank_uniformity

    with pytest.raises(InputError):
        _rank_uniformity([0.1, 0.5], B=18, bins=10)


def test_all_suite_names_have_runners():
    from features.validation.calibration import SUITE_RUNNERS, SUITES

    assert set(SUITES) == set(SUITE_RUNNERS)

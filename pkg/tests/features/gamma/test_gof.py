"""Tests for the conditional Gamma goodness-of-fit test."""

import numpy as np
import pytest


def test_fit_gamma_ml_matches_scipy():
    """ML shape from (S, P) agrees with scipy's fit at zero location."""
    from scipy import stats

    from features.gamma import GammaConstraint, fit_gamma_ml

    x = np.random.default_rng(0).gamma(2.0, 1.5, size=200)
    shape, scale = fit_gamma_ml(GammaConstraint.from_data(x))
    ref_shape, _, ref_scale = stats.gamma.fit(x, floc=0)
    assert shape == pytest.approx(ref_shape, rel=1e-4)
    assert scale == pytest.approx(ref_scale, rel=1e-4)


def test_anderson_darling_detects_misfit():
    from features.gamma import anderson_darling

    x = np.random.default_rng(1).gamma(2.0, 1.0, size=100)
    good = anderson_darling(x, 2.0, 1.0)
    bad = anderson_darling(x, 8.0, 1.0)
    assert 0.0 <= good < bad


def test_gof_report_shape():
    """Chain scheme: B replicates, p = rank / (B + 1)."""
    from core.chain import ChainConfig
    from features.gamma import gamma_gof_test

    x = np.random.default_rng(2).gamma(2.0, 1.0, size=12)
    report = gamma_gof_test(x, ChainConfig(seed=3, burn_in=200, thin=5), B=19)
    assert report.replicates == 19
    assert len(report.statistic_replicates) == 19
    assert report.p_value == pytest.approx(report.rank / 20)
    assert report.scheme == "chain"


@pytest.mark.parametrize("shape", [2.0, 0.5])
def test_gof_runs_on_large_samples(shape):
    """n=2000: the product over- or underflows a float but the test still runs."""
    import math

    from core.chain import ChainConfig
    from features.gamma import gamma_gof_test

    x = np.random.default_rng(8).gamma(shape, 1.0, size=2000)
    report = gamma_gof_test(x, ChainConfig(seed=1, burn_in=10, thin=1, eps=1e-4), B=4)
    assert report.replicates == 4
    assert 0.0 < report.p_value <= 1.0
    assert math.isfinite(report.metadata["log_P"])
    assert report.metadata["log_P"] == pytest.approx(float(np.sum(np.log(x))), rel=1e-12)


def test_gof_reproducible():
    from core.chain import ChainConfig
    from features.gamma import gamma_gof_test

    x = np.random.default_rng(4).gamma(2.0, 1.0, size=10)
    cfg = ChainConfig(seed=5, burn_in=50, thin=2)
    a = gamma_gof_test(x, cfg, B=9, scheme="besag", T=10)
    b = gamma_gof_test(x, cfg, B=9, scheme="besag", T=10)
    assert a.model_dump() == b.model_dump()


def test_besag_p_values_are_calibrated():
    """Under the null the serial-test p-values average about one half."""
    from core.chain import ChainConfig
    from features.gamma import gamma_gof_test

    p_values = []
    for i in range(40):
        x = np.random.default_rng(100 + i).gamma(2.0, 1.0, size=10)
        report = gamma_gof_test(x, ChainConfig(seed=i), B=19, scheme="besag", T=20)
        p_values.append(report.p_value)
    assert 0.3 < np.mean(p_values) < 0.7


def test_gof_input_validation():
    from core.chain import ChainConfig
    from core.errors import DegeneracyError, InputError
    from features.gamma import gamma_gof_test

    with pytest.raises(InputError):
        gamma_gof_test(np.array([1.0, 2.0, 3.0]), ChainConfig(), B=5)
    with pytest.raises(InputError):
        gamma_gof_test(np.array([1.0, 2.0, 3.0, 4.0]), ChainConfig(), B=0)
    with pytest.raises(DegeneracyError):
        gamma_gof_test(np.full(5, 2.0), ChainConfig(), B=5)
    with pytest.raises(InputError):
        gamma_gof_test(np.array([1.0, 2.0, 3.0, 4.0]), ChainConfig(), B=5, statistic="median")

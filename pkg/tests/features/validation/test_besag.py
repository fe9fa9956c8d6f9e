"""Tests for the exchangeable serial test."""

import numpy as np
import pytest


def test_upper_tail_rank_without_ties():
    from features.validation import upper_tail_rank

    rng = np.random.default_rng(0)
    assert upper_tail_rank(5.0, np.array([1.0, 2.0, 3.0]), rng) == 1
    assert upper_tail_rank(0.0, np.array([1.0, 2.0, 3.0]), rng) == 4


def test_upper_tail_rank_ties_are_uniform():
    """All-tied replicates spread the rank over 1..B+1."""
    from features.validation import upper_tail_rank

    rng = np.random.default_rng(1)
    ranks = [upper_tail_rank(1.0, np.ones(3), rng) for _ in range(4000)]
    counts = np.bincount(ranks, minlength=5)[1:]
    assert np.allclose(counts / 4000, 0.25, atol=0.03)


def test_upper_tail_rank_nan():
    from core.errors import InputError
    from features.validation import upper_tail_rank

    with pytest.raises(InputError):
        upper_tail_rank(float("nan"), np.ones(2), np.random.default_rng(0))


def test_iid_chain_p_values_uniform():
    """Exact sampler: ranks are uniform on 1..B+1."""
    from features.validation import IIDChain, besag_serial_test, chi_square_gof

    chain = IIDChain(lambda rng: float(rng.normal()))
    B = 9
    ranks = []
    for i in range(1000):
        x0 = float(np.random.default_rng(10_000 + i).normal())
        report = besag_serial_test(chain, x0, 1, B, lambda s: s, seed=i, scheme="iid")
        ranks.append(report.rank)
    edges = np.arange(0.5, B + 2.5)
    _, p = chi_square_gof(np.array(ranks), edges, np.full(B + 1, 1.0 / (B + 1)))
    assert p > 0.001


def test_zero_steps_reproduces_observed_state():
    """T = 0: every replicate equals x0, so the rank is a uniform tie-break."""
    from features.validation import IIDChain, besag_serial_test

    chain = IIDChain(lambda rng: float(rng.normal()))
    report = besag_serial_test(chain, 0.5, 0, 4, lambda s: s, seed=3)
    assert report.statistic_replicates == [0.5] * 4
    assert 1 <= report.rank <= 5


def test_report_is_reproducible_across_workers():
    from features.validation import IIDChain, besag_serial_test

    chain = IIDChain(lambda rng: float(rng.random()))
    a = besag_serial_test(chain, 0.3, 1, 20, lambda s: s, seed=9, workers=1)
    b = besag_serial_test(chain, 0.3, 1, 20, lambda s: s, seed=9, workers=4)
    assert a == b


def test_non_reversible_chain_rejected():
    from collections import Counter

    from core.errors import NonReversibleChainError
    from features.validation import besag_serial_test

    class OneWay:
        def advance(self, state, steps, rng):
            return state + steps, Counter()

        def reversed(self):
            return None

    with pytest.raises(NonReversibleChainError):
        besag_serial_test(OneWay(), 0, 1, 3, float, seed=0)


def test_argument_validation():
    from core.errors import InputError
    from features.validation import IIDChain, besag_serial_test

    chain = IIDChain(lambda rng: 0.0)
    with pytest.raises(InputError):
        besag_serial_test(chain, 0.0, 1, 0, float, seed=0)
    with pytest.raises(InputError):
        besag_serial_test(chain, 0.0, -1, 3, float, seed=0)


def test_report_validator():
    """p_value must equal rank / (B + 1)."""
    from pydantic import ValidationError

    from features.validation import TestReport

    with pytest.raises(ValidationError):
        TestReport(
            statistic_name="s",
            statistic_observed=0.0,
            statistic_replicates=[1.0, 2.0],
            rank=1,
            p_value=0.5,
            seed=0,
            steps=1,
            replicates=2,
            scheme="iid",
        )

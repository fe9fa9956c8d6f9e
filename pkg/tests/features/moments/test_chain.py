"""Tests for curve moves and the chain on the moment manifold."""

import math

import numpy as np
import pytest


def _state(n=10, seed=0):
    from features.moments import MomentState

    return MomentState.from_values(np.random.default_rng(seed).random(n))


def test_state_validation():
    from core.errors import InputError
    from features.moments import MomentState

    with pytest.raises(InputError):
        MomentState.from_values(np.array([0.5, 1.2]))
    with pytest.raises(InputError):
        MomentState.from_values(np.array([]))


def test_with_values_updates_power_sums():
    """Incremental power sums agree with a full recomputation."""
    state = _state()
    moved = state.with_values((1, 4), np.array([0.33, 0.77]))
    assert np.max(moved.drift()) < 1e-14
    moved.check()
    assert moved.x[1] == 0.33 and moved.x[4] == 0.77


def test_check_detects_drift():
    from core.errors import InvalidStateError
    from features.moments import MomentState

    state = _state()
    broken = MomentState(x=state.x, p=state.p + 1e-6, m=state.m)
    with pytest.raises(InvalidStateError):
        broken.check()


def test_curve_move_preserves_local_power_sums():
    """Every proposal keeps the five local power sums."""
    from features.moments import curve_move, power_sums

    state = _state()
    rng = np.random.default_rng(1)
    reasons = set()
    for _ in range(200):
        idx = tuple(int(i) for i in np.sort(rng.choice(state.n, size=5, replace=False)))
        record = curve_move(state, idx, 0.05, rng)
        if record.proposal is None:
            reasons.add(record.reason)
            continue
        assert np.allclose(power_sums(record.proposal, 4), record.local_sums, atol=1e-9)
        assert np.all((record.proposal >= 0.0) & (record.proposal <= 1.0))
    assert reasons <= {"out-of-box", "complex-roots", "residual-check"}


def test_curve_move_rejects_bad_blocks():
    from core.errors import InputError
    from features.moments import curve_move

    with pytest.raises(InputError):
        curve_move(_state(), (0, 1, 2, 3), 0.05, np.random.default_rng(0))
    with pytest.raises(InputError):
        curve_move(_state(), (0, 1, 2, 3, 3), 0.05, np.random.default_rng(0))


@pytest.mark.parametrize("acceptance", ["paper", "arclength"])
def test_chain_keeps_global_power_sums(acceptance):
    from core.chain import ChainConfig
    from features.moments import NeymanChain

    state = _state(12, seed=3)
    chain = NeymanChain(state.n, eps=0.05, acceptance=acceptance)
    final = None
    for final in chain.run(state, ChainConfig(seed=2, steps=2_000, burn_in=0, thin=500)):
        assert np.allclose(final.p, state.p, atol=1e-8)
        final.check()
    assert final is not None
    assert not np.allclose(final.x, state.x)


def test_chain_gray_schedule():
    from features.moments import NeymanChain

    state = _state(8, seed=5)
    chain = NeymanChain(state.n, schedule="gray")
    final, counts = chain.advance(state, 300, np.random.default_rng(0))
    assert np.allclose(final.p, state.p, atol=1e-8)
    assert sum(counts.values()) <= 300


def test_chain_rejects_small_n():
    from core.errors import InputError
    from features.moments import NeymanChain

    with pytest.raises(InputError):
        NeymanChain(5)
    with pytest.raises(InputError):
        NeymanChain(8, acceptance="exact")


def test_revolving_door_order():
    """Every five-subset once; neighbours differ by a single swap."""
    from features.moments.chain import revolving_door

    order = revolving_door(8, 5)
    assert len(order) == math.comb(8, 5)
    assert len(set(order)) == len(order)
    for a, b in zip(order, order[1:]):
        assert len(set(a) ^ set(b)) == 2


def test_gray_schedule_reversal():
    """The reversed sweep visits the same blocks last to first."""
    from features.moments import GraySubsets

    rng = np.random.default_rng(0)
    forward = GraySubsets(9, offset=3)
    backward = forward.reversed()
    steps = 15
    f = [forward.indices(s, steps, rng) for s in range(steps)]
    b = [backward.indices(s, steps, rng) for s in range(steps)]
    assert b == f[::-1]
    assert backward.reversed().indices(0, steps, rng) == f[0]


def test_neyman_chain_step_uses_config_eps():
    from core.chain import ChainConfig
    from features.moments import neyman_chain_step

    state = _state()
    new_state, record = neyman_chain_step(state, ChainConfig(eps=0.0), np.random.default_rng(0))
    assert record is not None
    assert np.allclose(new_state.p, state.p, atol=1e-9)


def test_curve_move_assigns_roots_uniformly():
    """Each of the four solved slots receives each sorted root about 1/4 of the time."""
    from features.moments import curve_move

    state = _state(10, seed=6)
    indices = (0, 1, 2, 3, 4)
    rng = np.random.default_rng(17)
    counts = np.zeros((4, 4))
    for _ in range(10_000):
        record = curve_move(state, indices, 0.01, rng)
        if record.proposal is None:
            continue
        others = [j for j in range(5) if j != record.moved]
        solved = record.proposal[others]
        ranks = np.argsort(np.argsort(solved))
        counts[np.arange(4), ranks] += 1
    accepted = counts[0].sum()
    assert accepted >= 5_000
    sigma = math.sqrt(accepted * 0.25 * 0.75)
    assert np.all(np.abs(counts - accepted / 4) <= 4 * sigma), counts


@pytest.mark.parametrize("rule", ["paper", "arclength"])
@pytest.mark.parametrize("ratio", [0.04, 0.25, 1.0, 4.0])
def test_accept_move_frequency_matches_target_ratio(rule, ratio):
    """Forced proposals with a known target ratio are accepted at min(1, ratio)."""
    from features.moments.chain import accept_move
    from features.validation.calibration import scaled_block_pair

    x, y = scaled_block_pair(ratio)
    rng = np.random.default_rng(8)
    trials = 20_000
    accepted = sum(accept_move(x, y, 0, rule, rng) is None for _ in range(trials))
    expected = min(1.0, ratio)
    if expected >= 1.0 - 1e-9:
        assert accepted == trials
    else:
        sigma = math.sqrt(trials * expected * (1 - expected))
        assert abs(accepted - trials * expected) <= 4 * sigma


def test_accept_move_reports_degenerate_blocks():
    from core.errors import InputError
    from features.moments.chain import accept_move, block_log_target

    repeated = np.array([0.2, 0.2, 0.2, 0.6, 0.7])
    fine = np.array([0.1, 0.3, 0.5, 0.6, 0.8])
    rng = np.random.default_rng(0)
    assert accept_move(repeated, fine, 2, "paper", rng) == "degenerate-current"
    assert accept_move(fine, repeated, 2, "arclength", rng) == "degenerate-jacobian"
    with pytest.raises(InputError):
        block_log_target(fine, 0, "other")


def test_chain_power_sum_drift_long_run():
    """10^5 transitions keep the stored power sums within 1e-7 of a recomputation."""
    from features.moments import NeymanChain

    state = _state(12, seed=9)
    chain = NeymanChain(state.n, eps=0.05, acceptance="arclength")
    final, _ = chain.advance(state, 100_000, np.random.default_rng(3))
    assert np.max(final.drift()) < 1e-7
    assert np.allclose(final.p, state.p, atol=1e-7)


@pytest.mark.slow
def test_chain_power_sum_drift_million_steps():
    from features.moments import NeymanChain

    state = _state(20, seed=10)
    chain = NeymanChain(state.n, eps=0.05)
    final, _ = chain.advance(state, 1_000_000, np.random.default_rng(4))
    assert np.max(final.drift()) < 1e-7
    assert np.allclose(final.p, state.p, atol=1e-7)

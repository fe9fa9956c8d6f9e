"""Tests for Jacobians, determinant identities and the Metropolis step."""

import math

import numpy as np
import pytest


def test_gram_jacobian_matches_cauchy_binet():
    """Gram determinant equals the sum of squared maximal minors."""
    from core.geometry import DerivativeMatrix, cauchy_binet_oracle, gram_jacobian

    rng = np.random.default_rng(7)
    for rows, cols in [(3, 2), (5, 3), (4, 4), (2, 6), (1, 5)]:
        d = DerivativeMatrix(rng.normal(size=(rows, cols)))
        assert gram_jacobian(d).value == pytest.approx(cauchy_binet_oracle(d), rel=1e-10)


def test_gram_jacobian_rank_deficient_is_degenerate():
    """Duplicate columns give J = 0 and the degenerate flag."""
    from core.geometry import DerivativeMatrix, gram_jacobian

    col = np.array([1.0, 2.0, 3.0])
    j = gram_jacobian(DerivativeMatrix(np.column_stack([col, col])))
    assert j.degenerate
    assert j.value < 1e-6
    assert j.log_value < math.log(1e-6)


def test_jacobian_of_identity_is_one():
    """Square orthogonal derivative has unit Jacobian."""
    from core.geometry import DerivativeMatrix, gram_jacobian

    j = gram_jacobian(DerivativeMatrix(np.eye(3)))
    assert j.value == pytest.approx(1.0)
    assert not j.degenerate
    assert j.log_value == pytest.approx(0.0, abs=1e-15)


def test_derivative_matrix_validation():
    """Non-finite and empty derivative matrices are rejected."""
    from core.errors import InputError
    from core.geometry import DerivativeMatrix

    with pytest.raises(InputError):
        DerivativeMatrix(np.array([[1.0, np.nan]]))
    with pytest.raises(InputError):
        DerivativeMatrix(np.zeros((0, 2)))


def test_derivative_matrix_vector_orientation():
    """1-D input becomes a column or a row depending on params_on."""
    from core.geometry import DerivativeMatrix

    assert DerivativeMatrix(np.ones(4), params_on="cols").entries.shape == (4, 1)
    assert DerivativeMatrix(np.ones(4), params_on="rows").entries.shape == (1, 4)


def test_oracle_capacity_limit():
    """The oracle refuses minors larger than its configured side."""
    from core.errors import CapacityError
    from core.geometry import DerivativeMatrix, cauchy_binet_oracle

    with pytest.raises(CapacityError):
        cauchy_binet_oracle(DerivativeMatrix(np.eye(12)))


def test_det_identity_reduce_matches_dense():
    """2 x 2 reduction agrees with the dense determinant."""
    from core.geometry import det_identity_reduce

    rng = np.random.default_rng(11)
    for q in (1, 2, 5, 20):
        v, w = rng.normal(size=q), rng.normal(size=q)
        dense = np.linalg.det(np.eye(q) + np.outer(v, v) + np.outer(w, w))
        assert det_identity_reduce(v, w) == pytest.approx(dense, rel=1e-12)


def test_det_identity_reduce_rejects_mismatched_lengths():
    from core.errors import InputError
    from core.geometry import det_identity_reduce

    with pytest.raises(InputError):
        det_identity_reduce(np.ones(3), np.ones(4))


def test_metropolis_step_always_accepts_uphill():
    """Proposals with higher target are accepted whatever the uniform."""
    from core.geometry import metropolis_step

    rng = np.random.default_rng(0)
    assert all(metropolis_step(0.0, 1.0, rng) for _ in range(100))


def test_metropolis_step_rejects_zero_target():
    """-inf proposals are never accepted."""
    from core.geometry import metropolis_step

    rng = np.random.default_rng(0)
    assert not any(metropolis_step(0.0, -math.inf, rng) for _ in range(100))


@pytest.mark.parametrize("delta", [-2.0, -0.5, 0.0, 1.0])
def test_metropolis_step_acceptance_rate(delta):
    """Acceptance frequency is min(1, exp(delta)) within 4 binomial standard errors."""
    from core.geometry import metropolis_step

    rng = np.random.default_rng(3)
    trials = 100_000
    rate = np.mean([metropolis_step(0.0, delta, rng) for _ in range(trials)])
    expected = min(1.0, math.exp(delta))
    assert abs(rate - expected) <= 4 * math.sqrt(expected * (1 - expected) / trials) + 1e-12


def test_metropolis_step_invalid_current():
    """A current state with zero target is a bug in the caller."""
    from core.errors import InputError, InvalidStateError
    from core.geometry import metropolis_step

    rng = np.random.default_rng(0)
    with pytest.raises(InvalidStateError):
        metropolis_step(-math.inf, 0.0, rng)
    with pytest.raises(InputError):
        metropolis_step(math.nan, 0.0, rng)


def test_coarea_conditional_unnormalized():
    """p / J, zero density short-circuits, degenerate J with positive p raises."""
    from core.errors import InputError, PreconditionError
    from core.geometry import JacobianValue, coarea_conditional_unnormalized

    assert coarea_conditional_unnormalized(2.0, JacobianValue.from_squared(4.0, 1e-14)) == pytest.approx(1.0)
    degenerate = JacobianValue.from_squared(0.0, 1e-14)
    assert coarea_conditional_unnormalized(0.0, degenerate) == 0.0
    with pytest.raises(PreconditionError):
        coarea_conditional_unnormalized(1.0, degenerate)
    with pytest.raises(InputError):
        coarea_conditional_unnormalized(-1.0, degenerate)


def test_fiber_normalizer_trapezoid():
    """Constant density over a unit interval integrates to that constant."""
    from core.geometry import fiber_normalizer

    assert fiber_normalizer(np.full(11, 3.0), 0.1) == pytest.approx(3.0)


def test_gram_jacobian_rotation_invariant():
    """Reparametrizing by an orthogonal matrix leaves J unchanged."""
    from core.geometry import DerivativeMatrix, gram_jacobian

    rng = np.random.default_rng(5)
    a = rng.normal(size=(6, 3))
    q, _ = np.linalg.qr(rng.normal(size=(3, 3)))
    assert gram_jacobian(DerivativeMatrix(a @ q)).value == pytest.approx(gram_jacobian(DerivativeMatrix(a)).value, rel=1e-10)


def test_horn_fiber_mass_diverges_only_at_zero():
    """{y > 0, |x| < exp(-y)} has area 2 but the fiber over x = 0 has infinite mass."""
    from core.geometry import horn_fiber_mass, normalizer_diverges

    caps = np.array([10.0, 20.0, 40.0, 80.0])
    at_zero = np.array([horn_fiber_mass(0.0, c) for c in caps])
    off_zero = np.array([horn_fiber_mass(0.1, c) for c in caps])
    assert np.allclose(at_zero, caps / 2)
    assert np.allclose(off_zero, -math.log(0.1) / 2)
    assert normalizer_diverges(at_zero, caps)
    assert not normalizer_diverges(off_zero, caps)
    assert horn_fiber_mass(1.5, 10.0) == 0.0

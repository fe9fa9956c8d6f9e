"""Neyman smooth model on [0, 1] and its conditional goodness-of-fit test."""

from __future__ import annotations

import logging
import math
from typing import Callable, Sequence

import numpy as np
from numpy.polynomial import Polynomial, legendre
from scipy import stats

from core.chain import ChainConfig
from core.errors import DegeneracyError, InputError
from features.moments.algebra import rank_diagnostic
from features.moments.chain import AcceptanceRule, NeymanChain, ScheduleName
from features.moments.models import MomentState, NeymanModel, exponent
from features.validation.besag import besag_serial_test
from features.validation.models import TestReport

logger = logging.getLogger(__name__)

NEYMAN_STATISTICS = ("legendre5", "custom")


def neyman_density(y: float, model: NeymanModel) -> float:
    if not 0.0 <= y <= 1.0:
        raise InputError(f"y must lie in [0, 1], got {y}")
    return math.exp(exponent(y, model.theta)) / model.z


def sample_neyman(n: int, model: NeymanModel, rng: np.random.Generator) -> np.ndarray:
    """n draws from f_theta by rejection from the uniform, envelope at the exponent's maximum."""
    if n < 1:
        raise InputError("n must be >= 1")
    poly = Polynomial(np.concatenate(([0.0], model.theta)))
    crit = [r.real for r in poly.deriv().roots() if abs(r.imag) < 1e-12 and 0.0 < r.real < 1.0]
    peak = max(float(poly(c)) for c in [0.0, 1.0, *crit])
    out = np.empty(n)
    filled = 0
    while filled < n:
        k = n - filled
        y = rng.random(k)
        u = rng.random(k)
        keep = y[np.log(u) < poly(y) - peak]
        out[filled : filled + keep.size] = keep
        filled += keep.size
    return out


def orthonormal_legendre(y: np.ndarray, degree: int) -> np.ndarray:
    """phi_k(y) = sqrt(2k + 1) P_k(2y - 1), orthonormal on [0, 1]."""
    coeffs = np.zeros(degree + 1)
    coeffs[degree] = 1.0
    return math.sqrt(2 * degree + 1) * legendre.legval(2.0 * np.asarray(y, dtype=float) - 1.0, coeffs)


def legendre_statistic(x: np.ndarray, degrees: Sequence[int]) -> float:
    """sum over k of n * (mean phi_k(x))^2."""
    x = np.asarray(x, dtype=float)
    return float(sum(x.size * float(np.mean(orthonormal_legendre(x, k))) ** 2 for k in degrees))


def make_neyman_statistic(name: str, degrees: Sequence[int] | None = None) -> tuple[str, Callable[[np.ndarray], float]]:
    """(display name, statistic) for ``legendre5`` or ``custom`` Legendre degrees."""
    if name == "legendre5":
        return "legendre5", lambda x: legendre_statistic(x, (5,))
    if name == "custom":
        if not degrees or any(d < 1 for d in degrees):
            raise InputError("custom statistic needs degrees >= 1")
        chosen = tuple(sorted(set(int(d) for d in degrees)))
        return "custom[" + ",".join(map(str, chosen)) + "]", lambda x: legendre_statistic(x, chosen)
    raise InputError(f"unknown statistic {name!r}; choose from {NEYMAN_STATISTICS}")


def neyman_psi_squared(x: np.ndarray, order: int = 4) -> tuple[float, float]:
    """Classical smooth-test statistic over degrees 1..order and its chi-square p-value."""
    stat = legendre_statistic(x, range(1, order + 1))
    return stat, float(stats.chi2.sf(stat, df=order))


def neyman_smooth_gof(
    data: np.ndarray,
    cfg: ChainConfig,
    B: int,
    T: int,
    statistic: str = "legendre5",
    degrees: Sequence[int] | None = None,
    schedule: ScheduleName = "random",
    acceptance: AcceptanceRule = "paper",
    workers: int | None = None,
) -> TestReport:
    """Serial test of the degree-4 smooth model given the first four power sums.

    Args:
        data: n >= 6 observations in [0, 1].
        cfg: Seed and proposal half-width; ``cfg.eps`` None selects the default.
        B: Number of replicates.
        T: Curve moves per leg.
        statistic: ``legendre5`` or ``custom`` with ``degrees``.
        schedule: ``random`` subsets or the ``gray`` revolving-door order.
        acceptance: ``paper`` or ``arclength`` Metropolis rule.
        workers: Thread count for the replicates.

    Returns:
        The serial-test report, with the rank diagnostic in its metadata.

    Raises:
        InputError: On data outside [0, 1] or too few observations.
        DegeneracyError: When the data have fewer than four distinct values.
    """
    x = np.asarray(data, dtype=float).ravel()
    if x.size < 6:
        raise InputError(f"need n >= 6 observations, got {x.size}")
    if B < 1:
        raise InputError("B must be >= 1")
    if np.any(x < 0.0) or np.any(x > 1.0):
        raise InputError("data must lie in [0, 1]")
    diag = rank_diagnostic(x)
    if diag.rank < 4 or diag.distinct_count < 4:
        raise DegeneracyError(f"data has {diag.distinct_count} distinct values; need at least 4")

    name, stat = make_neyman_statistic(statistic, degrees)
    chain = NeymanChain(x.size, eps=cfg.eps, acceptance=acceptance, schedule=schedule)
    state = MomentState.from_values(x)
    report = besag_serial_test(
        chain,
        state,
        T,
        B,
        lambda s: stat(s.x),
        cfg.seed,
        statistic_name=name,
        workers=workers,
        metadata={"n": x.size, "eps": chain.eps, "acceptance": acceptance, "schedule": schedule},
    )
    psi2, psi2_p = neyman_psi_squared(x)
    return report.model_copy(update={"classical_psi2": {"statistic": psi2, "p_value": psi2_p}})

"""Conditional goodness-of-fit test for the Gamma family given (S, P)."""

from __future__ import annotations

import logging
import math
from typing import Callable, Literal

import numpy as np
from scipy import optimize, special, stats

from core.chain import ChainConfig
from core.errors import DegeneracyError, InputError
from features.gamma.chain import GammaMetropolisChain
from features.gamma.chart import data_chart_point
from features.gamma.models import ChartPoint, GammaConstraint
from features.validation.besag import besag_serial_test, upper_tail_rank
from features.validation.models import TestReport

logger = logging.getLogger(__name__)

GammaScheme = Literal["chain", "besag"]


def fit_gamma_ml(c: GammaConstraint) -> tuple[float, float]:
    """Maximum-likelihood (shape, scale); depends on the data only through S and P.

    Solves log a - digamma(a) = log(S/n) - log(P)/n.
    """
    s = c.log_gap
    if s <= 0.0:
        raise DegeneracyError("all observations equal: the Gamma fit is degenerate")

    def g(a: float) -> float:
        return math.log(a) - float(special.digamma(a)) - s

    a0 = (3.0 - s + math.sqrt((s - 3.0) ** 2 + 24.0 * s)) / (12.0 * s)
    lo, hi = 0.5 * a0, 2.0 * a0
    while g(lo) < 0.0:
        lo *= 0.5
    while g(hi) > 0.0:
        hi *= 2.0
    shape = float(optimize.brentq(g, lo, hi, xtol=1e-14, rtol=1e-14))
    return shape, (c.S / c.n) / shape


def anderson_darling(x: np.ndarray, shape: float, scale: float) -> float:
    """A^2 distance of the empirical distribution of x to Gamma(shape, scale)."""
    xs = np.sort(np.asarray(x, dtype=float))
    n = xs.size
    cdf = np.clip(stats.gamma.cdf(xs, a=shape, scale=scale), 1e-300, 1.0 - 1e-16)
    i = np.arange(1, n + 1)
    return float(-n - np.sum((2 * i - 1) * (np.log(cdf) + np.log1p(-cdf[::-1]))) / n)


def sum_squares(x: np.ndarray) -> float:
    return float(np.sum(np.asarray(x, dtype=float) ** 2))


GAMMA_STATISTICS = ("anderson_darling", "sum_squares")


def make_gamma_statistic(name: str, c: GammaConstraint) -> Callable[[np.ndarray], float]:
    """Statistic on a full coordinate vector; the Gamma fit is fixed by (S, P)."""
    if name == "anderson_darling":
        shape, scale = fit_gamma_ml(c)
        return lambda x: anderson_darling(x, shape, scale)
    if name == "sum_squares":
        return sum_squares
    raise InputError(f"unknown statistic {name!r}; choose from {GAMMA_STATISTICS}")


def gamma_gof_test(
    data: np.ndarray,
    cfg: ChainConfig,
    B: int,
    statistic: str = "anderson_darling",
    scheme: GammaScheme = "chain",
    T: int | None = None,
    workers: int | None = None,
) -> TestReport:
    """Rank of the statistic on the data among B draws from the conditional law on M.

    ``chain`` takes B thinned states of one run after burn-in; ``besag`` runs
    the exchangeable serial test with T = ``T`` (default ``cfg.steps``).

    Args:
        data: n >= 4 positive observations.
        cfg: Chain seed, half-width, burn-in and thinning.
        B: Number of conditional draws.
        statistic: Name of a statistic in GAMMA_STATISTICS.
        scheme: ``chain`` or ``besag``.
        T: Steps per leg for ``besag``.
        workers: Thread count for ``besag`` replicates.

    Returns:
        Report whose p-value is the upper-tail rank over B + 1.
    """
    x = np.asarray(data, dtype=float).ravel()
    if x.size < 4:
        raise InputError(f"need n >= 4 observations, got {x.size}")
    if B < 1:
        raise InputError("B must be >= 1")
    c = GammaConstraint.from_data(x)
    if c.is_degenerate:
        raise DegeneracyError("all observations equal")

    stat = make_gamma_statistic(statistic, c)
    chain = GammaMetropolisChain(c, target="conditional", eps=cfg.eps)
    x0 = data_chart_point(x, c)
    metadata = {"n": c.n, "S": c.S, "log_P": c.log_P, "eps": chain.eps, "target": "conditional"}

    if scheme == "besag":
        steps = cfg.steps if T is None else T
        return besag_serial_test(
            chain,
            x0,
            steps,
            B,
            lambda point: stat(point.lifted),
            cfg.seed,
            statistic_name=statistic,
            workers=workers,
            metadata=metadata,
        )
    if scheme != "chain":
        raise InputError(f"unknown scheme {scheme!r}")

    run_cfg = cfg.model_copy(update={"steps": B * cfg.thin})
    states: list[ChartPoint] = [rec.point for rec in chain.run(run_cfg, start=x0)]
    observed = stat(x)
    values = np.array([stat(p.lifted) for p in states])
    rank = upper_tail_rank(observed, values, cfg.rng(B + 1))
    return TestReport(
        statistic_name=statistic,
        statistic_observed=observed,
        statistic_replicates=values.tolist(),
        rank=rank,
        p_value=rank / (B + 1),
        seed=cfg.seed,
        steps=run_cfg.burn_in + run_cfg.steps,
        replicates=B,
        scheme="chain",
        rejection_counts=chain.last_rejections,
        metadata={**metadata, "burn_in": cfg.burn_in, "thin": cfg.thin},
    )

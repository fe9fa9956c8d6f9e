"""Kolmogorov-Smirnov and Pearson chi-square goodness of fit, and a lag autocorrelation."""

from __future__ import annotations

import logging
from typing import Callable

import numpy as np
from scipy import stats

from core.errors import InputError

logger = logging.getLogger(__name__)


def ks_statistic(samples: np.ndarray, cdf: Callable[[np.ndarray], np.ndarray]) -> tuple[float, float]:
    """One-sample KS statistic sup|F_n - F| with its asymptotic p-value."""
    x = np.asarray(samples, dtype=float).ravel()
    if x.size == 0:
        raise InputError("ks_statistic needs at least one sample")
    result = stats.kstest(x, cdf, method="asymp")
    return float(result.statistic), float(result.pvalue)


def chi_square_gof(
    samples: np.ndarray,
    bin_edges: np.ndarray,
    expected_probs: np.ndarray,
) -> tuple[float, float]:
    """Pearson statistic over the given bins, (bins - 1) degrees of freedom."""
    x = np.asarray(samples, dtype=float).ravel()
    edges = np.asarray(bin_edges, dtype=float)
    probs = np.asarray(expected_probs, dtype=float)
    if edges.ndim != 1 or edges.size - 1 != probs.size:
        raise InputError(f"{edges.size} edges do not match {probs.size} bin probabilities")
    if probs.size < 2:
        raise InputError("chi_square_gof needs at least two bins")
    if np.any(probs < 0.0) or abs(probs.sum() - 1.0) > 1e-9:
        raise InputError("expected probabilities must be nonnegative and sum to 1")
    if x.size == 0:
        raise InputError("chi_square_gof needs at least one sample")

    observed, _ = np.histogram(x, bins=edges)
    expected = probs * x.size
    if np.any(expected < 5.0):
        logger.warning("chi-square: %d bins with expected count below 5", int(np.sum(expected < 5.0)))
    mask = expected > 0.0
    if np.any(observed[~mask] > 0):
        return float("inf"), 0.0
    stat = float(np.sum((observed[mask] - expected[mask]) ** 2 / expected[mask]))
    return stat, float(stats.chi2.sf(stat, df=probs.size - 1))


def lag_autocorrelation(values: np.ndarray, lag: int = 1) -> float:
    """Sample autocorrelation at ``lag``; 0 for a constant series."""
    v = np.asarray(values, dtype=float).ravel()
    if lag < 1 or lag >= v.size:
        raise InputError(f"lag must be in [1, {v.size - 1}]")
    centered = v - v.mean()
    denom = float(centered @ centered)
    if denom == 0.0:
        return 0.0
    return float(centered[:-lag] @ centered[lag:]) / denom

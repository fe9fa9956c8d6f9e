"""Calibration suites run by the ``validate`` command.

Each suite returns a JSON-ready summary with a ``passed`` flag. Streams are
derived from (seed, suite index, replication) so every suite replays
independently of the others.
"""

from __future__ import annotations

import logging
import math
from itertools import combinations
from typing import Any, Callable

import numpy as np

from core.chain import ChainConfig, derive_rng
from core.errors import InputError
from core.geometry import (
    DerivativeMatrix,
    cauchy_binet_oracle,
    det_identity_reduce,
    gram_jacobian,
    horn_fiber_mass,
    metropolis_step,
    normalizer_diverges,
)
from features.gamma import GammaConstraint, GammaMetropolisChain, chart_marginal_probabilities
from features.moments import neyman_smooth_gof
from features.moments.algebra import (
    gram_moment_matrix,
    newton_to_elementary,
    power_sums,
    solve_quartic_in_box,
    vandermonde_product,
)
from features.moments.chain import block_log_target
from features.pitfall.kernels import path_system, random_system, verify_pitfall
from features.torus.models import TorusParams
from features.torus.sampler import sample_torus_area, sample_torus_naive, theta_cdf, torus_surface_area
from features.validation.besag import IIDChain, besag_serial_test
from features.validation.gof import chi_square_gof, ks_statistic

logger = logging.getLogger(__name__)

SUITES = ("jacobian", "torus", "gamma", "moments", "acceptance", "pitfall", "besag", "neyman")

ACCEPTANCE_RATIOS = (0.04, 0.25, 1.0, 4.0)
_BASE_BLOCK = np.array([0.35, 0.42, 0.5, 0.57, 0.63])


def jacobian_suite(replications: int, seed: int) -> dict[str, Any]:
    worst_oracle = 0.0
    worst_reduce = 0.0
    for i in range(replications):
        rng = derive_rng(seed, 0, i)
        cols = int(rng.integers(1, 9))
        rows = int(rng.integers(cols, cols + 5))
        d = DerivativeMatrix(rng.normal(size=(rows, cols)))
        oracle = cauchy_binet_oracle(d)
        worst_oracle = max(worst_oracle, abs(gram_jacobian(d).value - oracle) / (1.0 + oracle))

        q = int(rng.integers(1, 51))
        v, w = rng.normal(size=q), rng.normal(size=q)
        dense = float(np.linalg.det(np.eye(q) + np.outer(v, v) + np.outer(w, w)))
        worst_reduce = max(worst_reduce, abs(det_identity_reduce(v, w) - dense) / dense)
    caps = np.array([10.0, 20.0, 40.0, 80.0])
    at_zero = [horn_fiber_mass(0.0, cap) for cap in caps]
    off_zero = [horn_fiber_mass(0.1, cap) for cap in caps]
    infinite_fiber_flagged = normalizer_diverges(np.array(at_zero), caps) and not normalizer_diverges(
        np.array(off_zero), caps
    )
    return {
        "max_oracle_error": worst_oracle,
        "max_reduce_error": worst_reduce,
        "infinite_fiber_flagged": infinite_fiber_flagged,
        "passed": worst_oracle <= 1e-10 and worst_reduce <= 1e-12 and infinite_fiber_flagged,
    }


def torus_suite(replications: int, seed: int, n: int = 1000, bins: int = 20) -> dict[str, Any]:
    """KS and a ``bins``-bin chi-square on theta for each replication, plus the area constant."""
    params = TorusParams(R=1.0, r=0.9)

    def cdf(t: np.ndarray) -> np.ndarray:
        return theta_cdf(np.clip(t, 0.0, 2.0 * math.pi), params)

    edges = np.linspace(0.0, 2.0 * math.pi, bins + 1)
    probs = np.diff(theta_cdf(edges, params))
    probs = probs / probs.sum()

    area_pass = 0
    chi_pass = 0
    naive_reject = 0
    for i in range(replications):
        area = np.array([s.theta for s in sample_torus_area(n, params, rng=derive_rng(seed, 1, i))])
        _, p_area = ks_statistic(area, cdf)
        area_pass += p_area > 0.01
        _, p_chi = chi_square_gof(area, edges, probs)
        chi_pass += p_chi > 0.001
        naive = sample_torus_naive(n, params, rng=derive_rng(seed, 1, replications + i))
        _, p_naive = ks_statistic(np.array([s.theta for s in naive]), cdf)
        naive_reject += p_naive < 0.001
    area_exact = 4.0 * math.pi**2 * params.r * params.R
    area_error = abs(torus_surface_area(params) - area_exact) / area_exact
    return {
        "area_pass_fraction": area_pass / replications,
        "chi_square_pass_fraction": chi_pass / replications,
        "naive_reject_fraction": naive_reject / replications,
        "surface_area_error": area_error,
        "passed": area_pass >= 0.95 * replications
        and chi_pass >= 0.95 * replications
        and naive_reject >= 0.99 * replications
        and area_error < 1e-6,
    }


def gamma_suite(replications: int, seed: int, bins: int = 20) -> dict[str, Any]:
    """n=3, S=3.5, P=1: chart histogram against quadrature in both modes, 1000 steps per replication.

    Every emitted state is also checked against the sum and product constraints.
    """
    c = GammaConstraint(n=3, S=3.5, P=1.0)
    steps = 1000 * replications
    out: dict[str, Any] = {"steps": steps}
    passed = True
    for k, mode in enumerate(("area", "conditional")):
        edges, expected = chart_marginal_probabilities(c, mode, bins)
        chain = GammaMetropolisChain(c, target=mode, eps=0.5)
        cfg = ChainConfig(seed=int(derive_rng(seed, 2, k).integers(2**63)), steps=steps, burn_in=1_000)
        free = []
        worst_sum = 0.0
        worst_prod = 0.0
        for rec in chain.run(cfg):
            free.append(rec.point.free_coords[0])
            s_err, p_err = rec.point.residuals(c)
            worst_sum = max(worst_sum, s_err)
            worst_prod = max(worst_prod, p_err)
        observed, _ = np.histogram(np.array(free), bins=edges)
        tv = 0.5 * float(np.abs(observed / observed.sum() - expected).sum())
        out[mode] = {"tv": tv, "max_sum_residual": worst_sum, "max_product_residual": worst_prod}
        passed = passed and tv < 0.05 and worst_sum < 1e-8 and worst_prod < 1e-8
    out["passed"] = passed
    return out


def moments_suite(replications: int, seed: int) -> dict[str, Any]:
    worst_root = 0.0
    worst_j4 = 0.0
    for i in range(replications):
        rng = derive_rng(seed, 3, i)
        while True:
            values = np.sort(rng.random(4))
            if np.min(np.diff(values)) >= 1e-3:
                break
        solution = solve_quartic_in_box(newton_to_elementary(power_sums(values, 4)))
        worst_root = math.inf if not solution.ok else max(worst_root, float(np.max(np.abs(solution.roots - values))))

        y = rng.random(5)
        _, det = gram_moment_matrix(y, 4)
        oracle = 576.0 * math.fsum(vandermonde_product(y[list(s)]) ** 2 for s in combinations(range(5), 4))
        worst_j4 = max(worst_j4, abs(det - oracle) / oracle)
    return {
        "max_root_error": worst_root,
        "max_j4_error": worst_j4,
        "passed": worst_root <= 1e-8 and worst_j4 <= 1e-10,
    }


def scaled_block_pair(ratio: float) -> tuple[np.ndarray, np.ndarray]:
    """Blocks x, y whose target ratio target(y) / target(x) is ``ratio`` under both rules.

    y = 1/2 + s (x - 1/2) multiplies det Gram by s^12 and every four-point
    Vandermonde product by s^6, so s = ratio^(-1/6).
    """
    if ratio <= 0.0:
        raise InputError("ratio must be positive")
    s = ratio ** (-1.0 / 6.0)
    x = _BASE_BLOCK.copy()
    y = 0.5 + s * (x - 0.5)
    if np.any(y < 0.0) or np.any(y > 1.0):
        raise InputError(f"ratio {ratio} pushes the scaled block out of [0, 1]")
    return x, y


def acceptance_suite(replications: int, seed: int) -> dict[str, Any]:
    """Forced proposals at fixed target ratios; 1000 trials per replication.

    The empirical acceptance frequency must match min(1, ratio) within three
    binomial standard deviations for both acceptance rules.
    """
    trials = 1000 * replications
    out: dict[str, Any] = {"trials": trials}
    passed = True
    for r_index, rule in enumerate(("paper", "arclength")):
        rows = []
        for k, ratio in enumerate(ACCEPTANCE_RATIOS):
            x, y = scaled_block_pair(ratio)
            log_x = block_log_target(x, 0, rule)
            log_y = block_log_target(y, 0, rule)
            realized = math.exp(log_y - log_x)
            expected = min(1.0, realized)
            rng = derive_rng(seed, 4, r_index, k)
            accepted = sum(metropolis_step(log_x, log_y, rng) for _ in range(trials))
            frequency = accepted / trials
            sigma = math.sqrt(expected * (1.0 - expected) / trials)
            ok = abs(realized - ratio) <= 1e-9 * ratio and abs(frequency - expected) <= 3.0 * sigma
            rows.append({"ratio": ratio, "realized": realized, "frequency": frequency, "sigma": sigma, "ok": ok})
            passed = passed and ok
        out[rule] = rows
    out["passed"] = passed
    return out


def pitfall_suite(replications: int, seed: int) -> dict[str, Any]:
    path = verify_pitfall(path_system(3))
    instances = min(replications, 20)
    failures = 0
    for i in range(instances):
        rng = derive_rng(seed, 5, i)
        size = int(rng.integers(3, 51))
        report = verify_pitfall(random_system(size, rng, closed=bool(i % 2 == 0)))
        failures += not (report.formula_error < 1e-10 and report.metropolized_ok)
    return {
        "path3_sigma": path.sigma_empirical,
        "path3_bias": path.bias,
        "random_instances": instances,
        "random_failures": failures,
        "passed": path.formula_error < 1e-10 and path.metropolized_ok and failures == 0,
    }


def _rank_uniformity(p_values: list[float], B: int, bins: int) -> float:
    """Chi-square p-value of the ranks p (B + 1) against uniform over ``bins`` equal rank groups."""
    if (B + 1) % bins:
        raise InputError(f"B + 1 = {B + 1} does not split into {bins} equal rank groups")
    ranks = np.rint(np.array(p_values) * (B + 1))
    edges = 0.5 + np.arange(bins + 1) * ((B + 1) / bins)
    _, p = chi_square_gof(ranks, edges, np.full(bins, 1.0 / bins))
    return p


def besag_suite(replications: int, seed: int, B: int = 19) -> dict[str, Any]:
    chain = IIDChain(lambda rng: float(rng.normal()))
    p_values = []
    for i in range(replications):
        x0 = float(derive_rng(seed, 6, i, 0).normal())
        report = besag_serial_test(chain, x0, 1, B, lambda s: s, int(derive_rng(seed, 6, i, 1).integers(2**63)))
        p_values.append(report.p_value)
    p = _rank_uniformity(p_values, B, B + 1)
    return {"replications": replications, "B": B, "chi_square_p": p, "passed": p > 0.01}


def neyman_suite(replications: int, seed: int, n: int = 25, B: int = 99, T: int = 500) -> dict[str, Any]:
    """Serial-test p-values of the Neyman chain on iid uniform data, binned into 10 rank groups.

    Uses the ``arclength`` acceptance rule, the exact Metropolis ratio for
    the curve move.
    """
    p_values = []
    for i in range(replications):
        x = derive_rng(seed, 7, i, 0).random(n)
        cfg = ChainConfig(seed=int(derive_rng(seed, 7, i, 1).integers(2**63)))
        report = neyman_smooth_gof(x, cfg, B=B, T=T, acceptance="arclength")
        p_values.append(report.p_value)
    p = _rank_uniformity(p_values, B, 10)
    return {"replications": replications, "n": n, "B": B, "T": T, "chi_square_p": p, "passed": p > 0.01}


SUITE_RUNNERS: dict[str, Callable[[int, int], dict[str, Any]]] = {
    "jacobian": jacobian_suite,
    "torus": torus_suite,
    "gamma": gamma_suite,
    "moments": moments_suite,
    "acceptance": acceptance_suite,
    "pitfall": pitfall_suite,
    "besag": besag_suite,
    "neyman": neyman_suite,
}


def run_calibration(suite: str, replications: int, seed: int) -> dict[str, Any]:
    """One suite by name, or every suite for ``all``."""
    if replications < 1:
        raise InputError("replications must be >= 1")
    names = list(SUITES) if suite == "all" else [suite]
    unknown = [s for s in names if s not in SUITE_RUNNERS]
    if unknown:
        raise InputError(f"unknown suite {unknown[0]!r}; choose from {SUITES + ('all',)}")
    results = {}
    for name in names:
        logger.info("calibration suite %s: %d replications", name, replications)
        results[name] = SUITE_RUNNERS[name](replications, seed)
    return {"suites": results, "passed": all(r["passed"] for r in results.values())}

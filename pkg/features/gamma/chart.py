"""Chart of the sum/product manifold and its Jacobians.

Given free coordinates x3..xn with t = S - sum(free) and q = P / prod(free),
the remaining pair solves x1 + x2 = t, x1 x2 = q, so
{x1, x2} = (t +- sqrt(t^2 - 4q)) / 2 with x1 >= x2.

q is formed as exp(log P - sum log free): for large n neither P nor the
product of the free coordinates fits in a float.
"""

from __future__ import annotations

import logging
import math

import numpy as np
from scipy import integrate, optimize

import config
from core.errors import DegeneracyError, InputError, OutOfDomainError
from core.geometry import (
    DerivativeMatrix,
    JacobianValue,
    degeneracy_tolerance,
    det_identity_reduce,
)
from features.gamma.models import ChartPoint, GammaConstraint

logger = logging.getLogger(__name__)


def lift_to_manifold(free_coords: np.ndarray, c: GammaConstraint) -> ChartPoint:
    """Solve for (x1, x2) given the free coordinates x3..xn.

    Args:
        free_coords: The n - 2 free coordinates, all positive.
        c: The sum/product constraint.

    Returns:
        The chart point with x1 >= x2.

    Raises:
        OutOfDomainError: If the free coordinates leave no positive real pair.
    """
    free = np.asarray(free_coords, dtype=float).ravel()
    if free.size != c.n - 2:
        raise InputError(f"expected {c.n - 2} free coordinates, got {free.size}")
    if np.any(free <= 0.0) or not np.all(np.isfinite(free)):
        raise OutOfDomainError("free coordinates must be positive")
    t = c.S - math.fsum(free)
    if t <= 0.0:
        raise OutOfDomainError(f"sum of free coordinates {c.S - t} reaches S = {c.S}")
    log_q = c.log_P - math.fsum(np.log(free))
    if log_q > 2.0 * math.log(t):
        raise OutOfDomainError("x1 x2 exceeds t^2: discriminant < 0")
    q = math.exp(log_q)
    disc = t * t - 4.0 * q
    if disc < 0.0:
        # round-off at the fold counts as the fold itself
        if disc < -config.GAMMA_FOLD_TOL * t * t:
            raise OutOfDomainError(f"discriminant {disc:.3e} < 0")
        disc = 0.0
    x1 = 0.5 * (t + math.sqrt(disc))
    x2 = q / x1
    lifted = np.concatenate(([x1, x2], free))
    return ChartPoint(free_coords=free, lifted=lifted, t=t, q=q, discriminant=disc)


def on_fold(point: ChartPoint) -> bool:
    return point.discriminant <= config.GAMMA_FOLD_TOL * point.t * point.t


def chart_partials(point: ChartPoint, c: GammaConstraint) -> tuple[np.ndarray, np.ndarray]:
    """Rows V = (D_j f1) and W = (D_j f2) over the free coordinates.

    D_j x1 = -1/2 + (-t + 2q/x_j) / (2 sqrt(disc)) and D_j x2 = -1 - D_j x1.

    Raises:
        DegeneracyError: On the fold, where both rows diverge.
    """
    if on_fold(point):
        raise DegeneracyError("chart derivative diverges on the fold x1 = x2")
    root = math.sqrt(point.discriminant)
    inner = (-point.t + 2.0 * point.q / point.free_coords) / (2.0 * root)
    return -0.5 + inner, -0.5 - inner


def chart_derivative_matrix(point: ChartPoint, c: GammaConstraint) -> DerivativeMatrix:
    """Dense n x (n-2) Df: rows V, W on top of the identity."""
    v, w = chart_partials(point, c)
    entries = np.vstack([v, w, np.eye(c.n - 2)])
    return DerivativeMatrix(entries, params_on="cols")


def numeric_chart_derivative(free_coords: np.ndarray, c: GammaConstraint, h: float = 1e-6) -> DerivativeMatrix:
    """Central differences of the lift, one column per free coordinate."""
    free = np.asarray(free_coords, dtype=float)
    cols = []
    for j in range(free.size):
        step = np.zeros_like(free)
        step[j] = h
        hi = lift_to_manifold(free + step, c).lifted
        lo = lift_to_manifold(free - step, c).lifted
        cols.append((hi - lo) / (2.0 * h))
    return DerivativeMatrix(np.column_stack(cols), params_on="cols")


def chart_jacobian(point: ChartPoint, c: GammaConstraint) -> JacobianValue:
    """J_{n-2} f via det(I + V V^T + W W^T) reduced to a 2 x 2 determinant."""
    v, w = chart_partials(point, c)
    squared = det_identity_reduce(v, w)
    return JacobianValue.from_squared(squared, config.TOL_DEGENERATE)


def jacobian_sufficient_gamma(x: np.ndarray) -> JacobianValue:
    """J_2 of T(x) = (sum x, sum log x): sqrt of sum_{i<j} (1/x_i - 1/x_j)^2."""
    x = np.asarray(x, dtype=float).ravel()
    if x.size < 1 or np.any(x <= 0.0) or not np.all(np.isfinite(x)):
        raise InputError("coordinates must be positive and finite")
    u = 1.0 / x
    # sum_{i<j} (u_i - u_j)^2 = n * sum (u_i - mean u)^2
    centred = u - u.mean()
    squared = float(x.size) * float(centred @ centred)
    gram = np.array([[float(x.size), float(u.sum())], [float(u.sum()), float(u @ u)]])
    return JacobianValue.from_squared(squared, degeneracy_tolerance(gram))


def gamma_conditional_logdensity(point: ChartPoint, c: GammaConstraint) -> float:
    """log J_{n-2} f - log J_2 T at the lifted point (Gamma base factor is 1)."""
    chart = chart_jacobian(point, c)
    suff = jacobian_sufficient_gamma(point.lifted)
    if chart.degenerate or suff.degenerate:
        raise DegeneracyError("conditional density undefined where a Jacobian vanishes")
    return chart.log_value - suff.log_value


def randomize_symmetry(point: ChartPoint, rng: np.random.Generator) -> np.ndarray:
    """Coin-flip x1 <-> x2, then a uniform permutation of all coordinates."""
    x = point.lifted.copy()
    if rng.random() < 0.5:
        x[0], x[1] = x[1], x[0]
    return rng.permutation(x)


def _scaling_margin(a: float, c: GammaConstraint) -> float:
    """log(t^2 / (4 P / p)) for free coordinates all equal to a; >= 0 inside U."""
    t = c.S - (c.n - 2) * a
    if t <= 0.0 or a <= 0.0:
        return -math.inf
    return 2.0 * math.log(t) + (c.n - 2) * math.log(a) - math.log(4.0) - c.log_P


def feasible_scaling_interval(c: GammaConstraint) -> tuple[float, float]:
    """Interval of a for which (a, ..., a) lies in U.

    The margin is concave in a with its maximum n log(S/n) - log P >= 0 at
    a = S/n, so each end is found by bracketing on one side of S/n.
    """
    peak = c.S / c.n
    if c.is_degenerate or _scaling_margin(peak, c) <= 0.0:
        return peak, peak

    lo = peak
    while _scaling_margin(lo, c) >= 0.0:
        lo *= 0.5
    a_lo = optimize.brentq(_scaling_margin, lo, peak, args=(c,), xtol=1e-15, rtol=1e-13)

    top = c.S / (c.n - 2)
    gap = top - peak
    hi = peak + 0.5 * gap
    k = 1
    while _scaling_margin(hi, c) >= 0.0 and k < 60:
        k += 1
        hi = top - gap * 0.5**k
    a_hi = optimize.brentq(_scaling_margin, peak, hi, args=(c,), xtol=1e-15, rtol=1e-13)
    return float(a_lo), float(a_hi)


def default_start(c: GammaConstraint) -> ChartPoint:
    """Equal free coordinates at the midpoint of the feasible scaling interval."""
    a_lo, a_hi = feasible_scaling_interval(c)
    for a in (0.5 * (a_lo + a_hi), c.S / c.n):
        point = lift_to_manifold(np.full(c.n - 2, a), c)
        if not on_fold(point):
            return point
    raise DegeneracyError("no interior start: the manifold collapses to a point")


def data_chart_point(x: np.ndarray, c: GammaConstraint) -> ChartPoint:
    """Chart point for observed data: the max and min become x1, x2."""
    x = np.asarray(x, dtype=float).ravel()
    if x.size != c.n:
        raise InputError(f"expected {c.n} coordinates, got {x.size}")
    i_max = int(np.argmax(x))
    i_min = int(np.argmin(x))
    if i_max == i_min or x[i_max] == x[i_min]:
        raise DegeneracyError("all coordinates equal")
    free = np.delete(x, [i_max, i_min])
    return lift_to_manifold(free, c)


def chart_density(a: float, c: GammaConstraint, target: str = "area") -> float:
    """Unnormalized chart density at the single free coordinate ``a`` (n = 3); 0 off U and on the fold."""
    try:
        point = lift_to_manifold(np.array([a]), c)
    except OutOfDomainError:
        return 0.0
    if on_fold(point):
        return 0.0
    try:
        if target == "area":
            return chart_jacobian(point, c).value
        return math.exp(gamma_conditional_logdensity(point, c))
    except DegeneracyError:
        return 0.0


def chart_marginal_probabilities(c: GammaConstraint, target: str = "area", bins: int = 20) -> tuple[np.ndarray, np.ndarray]:
    """Bin edges over U and the bin probabilities of the chart density, by quadrature.

    Args:
        c: A constraint with n = 3, so the chart is one-dimensional.
        target: ``area`` or ``conditional``.
        bins: Number of equal-width bins across the feasible interval.

    Returns:
        (edges, probabilities), probabilities summing to 1.
    """
    if c.n != 3:
        raise InputError(f"the chart marginal oracle needs n = 3, got {c.n}")
    if target not in ("area", "conditional"):
        raise InputError(f"unknown target {target!r}")
    if bins < 1:
        raise InputError("bins must be >= 1")
    lo, hi = feasible_scaling_interval(c)
    if hi <= lo:
        raise DegeneracyError("the feasible interval is a single point")
    edges = np.linspace(lo, hi, bins + 1)
    masses = np.array(
        [integrate.quad(chart_density, a, b, args=(c, target), limit=200)[0] for a, b in zip(edges[:-1], edges[1:])]
    )
    return edges, masses / masses.sum()

"""Jacobians, determinant identities, the Metropolis test and the co-area kernel.

Every sampler in the package reduces to the same few pieces: the area
Jacobian J_k f = sqrt(det Gram(Df)) of a chart or of a constraint map, a
log-domain accept/reject step, and the fiber density p / J_N Phi.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations
from typing import Literal

import numpy as np
from scipy import integrate

import config
from core.errors import (
    CapacityError,
    InputError,
    InvalidStateError,
    PreconditionError,
)

Orientation = Literal["cols", "rows"]


@dataclass(frozen=True)
class DerivativeMatrix:
    """Dense derivative matrix; ``params_on`` names the axis indexing parameters."""

    entries: np.ndarray
    params_on: Orientation = "cols"

    def __post_init__(self) -> None:
        arr = np.asarray(self.entries, dtype=float)
        if arr.ndim == 1:
            arr = arr.reshape(-1, 1) if self.params_on == "cols" else arr.reshape(1, -1)
        if arr.ndim != 2 or 0 in arr.shape:
            raise InputError(f"derivative matrix must be 2-D and non-empty, got shape {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise InputError("derivative matrix has non-finite entries")
        if self.params_on not in ("cols", "rows"):
            raise InputError(f"unknown orientation {self.params_on!r}")
        object.__setattr__(self, "entries", arr)

    @property
    def rows(self) -> int:
        return self.entries.shape[0]

    @property
    def cols(self) -> int:
        return self.entries.shape[1]

    @property
    def k(self) -> int:
        return min(self.rows, self.cols)

    def gram(self) -> np.ndarray:
        """Gram product on the small side (k x k)."""
        a = self.entries
        return a.T @ a if self.cols <= self.rows else a @ a.T


@dataclass(frozen=True)
class JacobianValue:
    value: float
    squared: float
    degenerate: bool

    @classmethod
    def from_squared(cls, squared: float, tol: float) -> "JacobianValue":
        """Clamp round-off negatives to zero and flag values at or below ``tol``."""
        sq = max(float(squared), 0.0)
        return cls(value=math.sqrt(sq), squared=sq, degenerate=sq <= tol)

    @property
    def log_value(self) -> float:
        return math.log(self.value) if self.value > 0.0 else -math.inf


def degeneracy_tolerance(gram: np.ndarray) -> float:
    """1e-14 (configurable) times scale**k, scale = largest Gram diagonal entry."""
    k = gram.shape[0]
    scale = float(np.max(np.abs(np.diag(gram)))) if k else 0.0
    if scale == 0.0:
        return config.TOL_DEGENERATE
    return config.TOL_DEGENERATE * scale**k


def gram_jacobian(d: DerivativeMatrix) -> JacobianValue:
    """J_k f = sqrt(det Gram), determinant via a pivoted LU of the small side."""
    g = d.gram()
    sign, logdet = np.linalg.slogdet(g)
    squared = 0.0 if sign <= 0 else math.exp(logdet)
    return JacobianValue.from_squared(squared, degeneracy_tolerance(g))


def cauchy_binet_oracle(d: DerivativeMatrix) -> float:
    """sqrt of the sum of squared k x k minors, enumerated explicitly.

    Test oracle only: cost grows as C(max(rows, cols), k).
    """
    k = d.k
    if k > config.ORACLE_MAX_SIDE:
        raise CapacityError(f"minor side {k} exceeds oracle limit {config.ORACLE_MAX_SIDE}")
    a = d.entries if d.cols <= d.rows else d.entries.T
    long_side = a.shape[0]
    if math.comb(long_side, k) > config.ORACLE_MAX_MINORS:
        raise CapacityError(f"C({long_side}, {k}) minors exceed oracle limit {config.ORACLE_MAX_MINORS}")
    total = math.fsum(float(np.linalg.det(a[list(rows), :])) ** 2 for rows in combinations(range(long_side), k))
    return math.sqrt(total)


def det_identity_reduce(v: np.ndarray, w: np.ndarray) -> float:
    """det(I_q + V V^T + W W^T) through det(I_p + BC) = det(I_m + CB) with m = 2."""
    v = np.asarray(v, dtype=float).ravel()
    w = np.asarray(w, dtype=float).ravel()
    if v.shape != w.shape:
        raise InputError(f"V and W lengths differ: {v.size} != {w.size}")
    if not (np.all(np.isfinite(v)) and np.all(np.isfinite(w))):
        raise InputError("V and W must be finite")
    vv = float(v @ v)
    ww = float(w @ w)
    vw = float(v @ w)
    return (1.0 + vv) * (1.0 + ww) - vw * vw


def metropolis_step(current_log_target: float, proposal_log_target: float, rng: np.random.Generator) -> bool:
    """Accept with probability min(1, exp(proposal - current)); draws one uniform."""
    if math.isnan(current_log_target) or math.isnan(proposal_log_target):
        raise InputError("log targets must not be NaN")
    if not math.isfinite(current_log_target):
        raise InvalidStateError(f"current state has log target {current_log_target}")
    u = rng.random()
    delta = proposal_log_target - current_log_target
    return bool(u < math.exp(min(0.0, delta)))


def coarea_conditional_unnormalized(p_value: float, jacobian: JacobianValue) -> float:
    """p(x) / J_N Phi(x): fiber density with respect to area measure, unnormalized."""
    if p_value < 0.0 or math.isnan(p_value):
        raise InputError(f"density value must be nonnegative, got {p_value}")
    if p_value == 0.0:
        return 0.0
    if jacobian.degenerate:
        raise PreconditionError("positive density on a point where J_N Phi vanishes")
    return p_value / jacobian.value


def fiber_normalizer(values: np.ndarray, spacing: float) -> float:
    """m(y): trapezoid integral of a fiber density sampled at uniform arc spacing."""
    values = np.asarray(values, dtype=float)
    if values.ndim != 1 or values.size < 2:
        raise InputError("need at least two fiber samples")
    if spacing <= 0.0:
        raise InputError("spacing must be positive")
    return float(integrate.trapezoid(values, dx=spacing))


def horn_fiber_mass(level: float, y_max: float, grid: int = 1001) -> float:
    """m(level) for uniform area measure on {y > 0, |x| < exp(-y)} under Phi(x, y) = x,
    with the fiber truncated at y_max.

    The region has area 2 and J Phi = 1, so the fiber over ``level`` carries
    density 1/2 on 0 < y < -log|level|; over level 0 it is the whole half-line.
    """
    if grid < 2:
        raise InputError("grid must be >= 2")
    if y_max <= 0.0:
        raise InputError("y_max must be positive")
    if abs(level) >= 1.0:
        return 0.0
    top = y_max if level == 0.0 else min(y_max, -math.log(abs(level)))
    ys = np.linspace(0.0, top, grid)
    jac = JacobianValue.from_squared(1.0, config.TOL_DEGENERATE)
    values = np.array([coarea_conditional_unnormalized(0.5, jac) for _ in ys])
    return fiber_normalizer(values, float(ys[1] - ys[0]))


def normalizer_diverges(masses: np.ndarray, caps: np.ndarray, rel_growth: float = 0.25) -> bool:
    """True when truncated normalizers keep growing in proportion to the truncation.

    ``masses[i]`` is the normalizer computed with the fiber cut at ``caps[i]``;
    a finite m(y) stops growing once the cap passes the fiber's end.
    """
    m = np.asarray(masses, dtype=float)
    c = np.asarray(caps, dtype=float)
    if m.shape != c.shape or m.size < 3:
        raise InputError("need at least three (mass, cap) pairs")
    growth = np.diff(m) / np.diff(c)
    return bool(np.all(growth[-2:] >= rel_growth * growth[0]) and growth[0] > 0.0)

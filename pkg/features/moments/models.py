"""Data models for the moment manifold sum_j x_j^i = p_i, i = 1..m."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from core.errors import InputError, InvalidStateError

POWER_SUM_ATOL = 1e-9


def _power_sums(x: np.ndarray, m: int) -> np.ndarray:
    return np.array([math.fsum(x**i) for i in range(1, m + 1)])


@dataclass(frozen=True, eq=False)
class MomentState:
    """Coordinates in [0, 1]^n with their first m power sums carried along."""

    x: np.ndarray
    p: np.ndarray
    m: int = 4

    @classmethod
    def from_values(cls, values: np.ndarray, m: int = 4) -> "MomentState":
        x = np.asarray(values, dtype=float).ravel().copy()
        if x.size == 0 or not np.all(np.isfinite(x)):
            raise InputError("state needs finite coordinates")
        if np.any(x < 0.0) or np.any(x > 1.0):
            raise InputError("coordinates must lie in [0, 1]")
        if m < 1:
            raise InputError("order m must be >= 1")
        return cls(x=x, p=_power_sums(x, m), m=m)

    @property
    def n(self) -> int:
        return int(self.x.size)

    def drift(self) -> np.ndarray:
        """|recomputed - stored| per power sum."""
        return np.abs(_power_sums(self.x, self.m) - self.p)

    def check(self) -> None:
        if np.any(self.x < 0.0) or np.any(self.x > 1.0):
            raise InvalidStateError("state left the unit box")
        worst = float(np.max(self.drift()))
        if worst > POWER_SUM_ATOL:
            raise InvalidStateError(f"stored power sums drifted by {worst:.3e}")

    def with_values(self, indices: tuple[int, ...], values: np.ndarray) -> "MomentState":
        """Replace x[indices]; the power sums are updated incrementally."""
        idx = np.asarray(indices, dtype=int)
        old = self.x[idx]
        new = np.asarray(values, dtype=float)
        x = self.x.copy()
        x[idx] = new
        delta = np.array([math.fsum(new**i) - math.fsum(old**i) for i in range(1, self.m + 1)])
        return MomentState(x=x, p=self.p + delta, m=self.m)

    def resynced(self) -> "MomentState":
        return MomentState(x=self.x, p=_power_sums(self.x, self.m), m=self.m)


@dataclass(frozen=True, eq=False)
class CurveMoveRecord:
    """One five-coordinate curve move: what was tried and how it ended."""

    indices: tuple[int, ...]
    local_sums: np.ndarray
    moved: int
    current: np.ndarray
    proposal: np.ndarray | None
    reason: str | None
    accepted: bool = False


@dataclass(frozen=True, eq=False)
class NeymanModel:
    """f_theta(y) = exp(theta_1 y + ... + theta_m y^m) / z on [0, 1]."""

    theta: np.ndarray
    z: float

    @classmethod
    def from_theta(cls, theta: np.ndarray) -> "NeymanModel":
        th = np.asarray(theta, dtype=float).ravel()
        if th.size == 0 or not np.all(np.isfinite(th)):
            raise InputError("theta must be a finite nonempty vector")
        z, _ = integrate.quad(lambda y: math.exp(exponent(y, th)), 0.0, 1.0, epsabs=0.0, epsrel=1e-12, limit=200)
        return cls(theta=th, z=float(z))

    @property
    def order(self) -> int:
        return int(self.theta.size)


def exponent(y: float | np.ndarray, theta: np.ndarray) -> float | np.ndarray:
    """sum_i theta_i y^i, evaluated by Horner's rule."""
    acc = np.zeros_like(np.asarray(y, dtype=float))
    for c in theta[::-1]:
        acc = (acc + c) * y
    return acc if acc.ndim else float(acc)

"""Data models for the sum/product (Gamma sufficient statistic) manifold."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from core.errors import InfeasibleError, InputError

AM_GM_RTOL = 1e-12


def _exp_or_inf(v: float) -> float:
    try:
        return math.exp(v)
    except OverflowError:
        return math.inf


@dataclass(frozen=True)
class GammaConstraint:
    """sum(x) = S and prod(x) = P over n positive coordinates.

    Give either ``P`` or ``log_P``. All arithmetic uses ``log_P``; for large n
    the product itself leaves the float range, and ``P`` is then reported as
    0 or inf.
    """

    n: int
    S: float
    P: float | None = None
    log_P: float | None = None

    def __post_init__(self) -> None:
        if self.n < 3:
            raise InputError(f"n must be >= 3, got {self.n}")
        if not (self.S > 0.0 and math.isfinite(self.S)):
            raise InputError(f"S must be positive and finite, got {self.S}")
        if (self.P is None) == (self.log_P is None):
            raise InputError("give exactly one of P and log_P")
        if self.log_P is None:
            if not (self.P > 0.0 and math.isfinite(self.P)):
                raise InputError(f"P must be positive and finite, got {self.P}")
            object.__setattr__(self, "log_P", math.log(self.P))
        else:
            if not math.isfinite(self.log_P):
                raise InputError(f"log_P must be finite, got {self.log_P}")
            object.__setattr__(self, "P", _exp_or_inf(self.log_P))
        if self.log_gap < -AM_GM_RTOL:
            raise InfeasibleError(
                f"P^(1/n) = {math.exp(self.log_P / self.n):.6g} exceeds S/n = {self.S / self.n:.6g}"
            )

    @classmethod
    def from_data(cls, x: np.ndarray) -> "GammaConstraint":
        x = np.asarray(x, dtype=float)
        if x.ndim != 1:
            raise InputError("data must be a vector")
        if np.any(x <= 0.0) or not np.all(np.isfinite(x)):
            raise InputError("data must be strictly positive and finite")
        return cls(n=int(x.size), S=math.fsum(x), log_P=math.fsum(np.log(x)))

    @property
    def log_gap(self) -> float:
        """log(S/n) - log(P)/n, nonnegative by AM-GM."""
        return math.log(self.S / self.n) - self.log_P / self.n

    @property
    def is_degenerate(self) -> bool:
        """AM = GM: the manifold is the single point (S/n, ..., S/n)."""
        return self.log_gap <= AM_GM_RTOL


@dataclass(frozen=True, eq=False)
class ChartPoint:
    """Free coordinates (x3..xn) and their lift (x1, x2, x3..xn) onto M+.

    ``q`` is the product x1 x2 = P / prod(free).
    """

    free_coords: np.ndarray
    lifted: np.ndarray
    t: float
    q: float
    discriminant: float

    @property
    def n(self) -> int:
        return int(self.lifted.size)

    def residuals(self, c: GammaConstraint) -> tuple[float, float]:
        """(|sum - S|, |prod / P - 1|) for the lifted point."""
        s = abs(math.fsum(self.lifted) - c.S)
        prod_ratio = math.exp(math.fsum(np.log(self.lifted)) - c.log_P)
        return s, abs(prod_ratio - 1.0)

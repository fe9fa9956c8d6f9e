"""Random-walk Metropolis on the chart of the sum/product manifold."""

from __future__ import annotations

import logging
import math
from collections import Counter
from dataclasses import dataclass
from typing import Iterator, Literal

import numpy as np

import config
from core.chain import ChainConfig, emits_at
from core.errors import DegeneracyError, InfeasibleError, InputError, OutOfDomainError
from core.geometry import metropolis_step
from features.gamma.chart import (
    chart_jacobian,
    default_start,
    gamma_conditional_logdensity,
    lift_to_manifold,
    on_fold,
    randomize_symmetry,
)
from features.gamma.models import ChartPoint, GammaConstraint

logger = logging.getLogger(__name__)

GammaTarget = Literal["area", "conditional"]


@dataclass(frozen=True, eq=False)
class GammaRecord:
    """One emitted state: the randomized lifted vector and the chart point behind it."""

    step: int
    x: np.ndarray
    point: ChartPoint
    log_density: float
    accepted: bool

    def as_row(self) -> list[float]:
        return [*self.x.tolist(), self.log_density, 1.0 if self.accepted else 0.0]


class GammaMetropolisChain:
    """Uniform-cube proposals on x3..xn; the target is the chart Jacobian
    (area) or chart Jacobian over J_2 T (conditional).

    An optional permutation move, taken with probability ``permute_prob``,
    applies a uniform permutation to the lifted point and folds it back onto
    M+. Both targets are permutation invariant, so the move needs no test.
    """

    def __init__(
        self,
        c: GammaConstraint,
        target: GammaTarget = "area",
        eps: float | None = None,
        permute_prob: float = 0.0,
    ) -> None:
        if target not in ("area", "conditional"):
            raise InputError(f"unknown target {target!r}")
        if not 0.0 <= permute_prob <= 1.0:
            raise InputError("permute_prob must be in [0, 1]")
        if eps is None:
            eps = config.GAMMA_EPS_FRACTION * c.S / c.n
        if eps < 0.0 or not math.isfinite(eps):
            raise InputError(f"eps must be finite and >= 0, got {eps}")
        self.c = c
        self.target = target
        self.eps = float(eps)
        self.permute_prob = float(permute_prob)
        self.last_rejections: dict[str, int] = {}

    def log_target(self, point: ChartPoint) -> float:
        if self.target == "area":
            return chart_jacobian(point, self.c).log_value
        return gamma_conditional_logdensity(point, self.c)

    def _evaluate(self, free: np.ndarray) -> tuple[ChartPoint | None, float, str | None]:
        try:
            point = lift_to_manifold(free, self.c)
        except OutOfDomainError:
            return None, -math.inf, "out-of-domain"
        if on_fold(point):
            return None, -math.inf, "fold"
        try:
            return point, self.log_target(point), None
        except DegeneracyError:
            return None, -math.inf, "degenerate-jacobian"

    def _permute(self, point: ChartPoint, rng: np.random.Generator) -> tuple[ChartPoint | None, float, str | None]:
        x = rng.permutation(point.lifted)
        return self._evaluate(x[2:])

    def step(
        self,
        point: ChartPoint,
        log_p: float,
        rng: np.random.Generator,
    ) -> tuple[ChartPoint, float, bool, str | None]:
        """One transition; returns (state, log target, accepted, rejection reason)."""
        if self.permute_prob > 0.0 and rng.random() < self.permute_prob:
            proposal, log_q, reason = self._permute(point, rng)
            if proposal is None:
                return point, log_p, False, reason
            return proposal, log_q, True, None

        free = point.free_coords + rng.uniform(-self.eps, self.eps, size=point.free_coords.size)
        proposal, log_q, reason = self._evaluate(free)
        accepted = metropolis_step(log_p, log_q, rng)
        if proposal is None or not accepted:
            return point, log_p, False, reason or "metropolis"
        return proposal, log_q, True, None

    def start(self, start: ChartPoint | None = None) -> tuple[ChartPoint, float]:
        if start is None:
            start = default_start(self.c)
        elif on_fold(start):
            raise InputError("start point lies on the fold x1 = x2")
        log_p = self.log_target(start)
        if not math.isfinite(log_p):
            raise InputError("start point has zero target density")
        return start, log_p

    def run(self, cfg: ChainConfig, start: ChartPoint | None = None) -> Iterator[GammaRecord]:
        """Emit ``cfg.emissions`` states after ``cfg.burn_in`` transitions.

        Args:
            cfg: Seed, burn-in, post-burn-in steps and thinning.
            start: Chart point to start from; the default start when None.

        Yields:
            One record per emission, its x randomized over the symmetry group.

        Raises:
            InfeasibleError: When no interior start exists.
        """
        rng = cfg.rng(0)
        if self.c.is_degenerate:
            logger.warning("AM = GM: the manifold is the single point %.6g^%d; no chain run", self.c.S / self.c.n, self.c.n)
            point = lift_to_manifold(np.full(self.c.n - 2, self.c.S / self.c.n), self.c)
            yield GammaRecord(step=0, x=point.lifted.copy(), point=point, log_density=math.inf, accepted=False)
            return

        try:
            point, log_p = self.start(start)
        except DegeneracyError as exc:
            raise InfeasibleError(str(exc)) from exc

        logger.info(
            "gamma chain: n=%d S=%.6g log_P=%.6g target=%s eps=%.4g steps=%d burn_in=%d thin=%d",
            self.c.n, self.c.S, self.c.log_P, self.target, self.eps, cfg.steps, cfg.burn_in, cfg.thin,
        )
        rejections: Counter[str] = Counter()
        accepted_total = 0
        total = cfg.burn_in + cfg.steps
        for step in range(1, total + 1):
            point, log_p, accepted, reason = self.step(point, log_p, rng)
            if accepted:
                accepted_total += 1
            else:
                rejections[reason or "metropolis"] += 1
            if emits_at(step, cfg):
                x = randomize_symmetry(point, rng)
                yield GammaRecord(step=step, x=x, point=point, log_density=log_p, accepted=accepted)

        self.last_rejections = dict(sorted(rejections.items()))
        logger.info(
            "gamma chain done: acceptance %.3f, rejections %s",
            accepted_total / total if total else 0.0,
            self.last_rejections,
        )

    def advance(self, state: ChartPoint, steps: int, rng: np.random.Generator) -> tuple[ChartPoint, Counter[str]]:
        point, log_p = self.start(state)
        counts: Counter[str] = Counter()
        for _ in range(steps):
            point, log_p, accepted, reason = self.step(point, log_p, rng)
            if not accepted:
                counts[reason or "metropolis"] += 1
        return point, counts

    def reversed(self) -> "GammaMetropolisChain":
        """Metropolis kernels are reversible: the time reversal is the chain itself."""
        return self

"""Metropolis-within-Gibbs on the moment manifold.

Each step picks five coordinates, moves one of them along the curve on which
the five local power sums stay fixed, solves a quartic for the other four and
accepts or rejects the result.
"""

from __future__ import annotations

import logging
import math
from collections import Counter
from dataclasses import replace
from functools import cached_property
from typing import Iterator, Literal, Protocol

import numpy as np

import config
from core.chain import ChainConfig, emits_at
from core.errors import DegeneracyError, InputError
from core.geometry import metropolis_step
from features.moments.algebra import (
    block_degenerate,
    gram_moment_matrix,
    newton_to_elementary,
    power_sums,
    solve_quartic_in_box,
    vandermonde_product,
)
from features.moments.models import CurveMoveRecord, MomentState

logger = logging.getLogger(__name__)

BLOCK = 5
AcceptanceRule = Literal["paper", "arclength"]
ScheduleName = Literal["random", "gray"]


def curve_move(
    state: MomentState,
    indices: tuple[int, ...],
    eps: float,
    rng: np.random.Generator,
) -> CurveMoveRecord:
    """Perturb one of the five chosen coordinates and solve for the other four.

    Args:
        state: Current state.
        indices: Five distinct positions forming the block.
        eps: Half-width of the uniform perturbation.
        rng: Source of every random draw in the move.

    Returns:
        The move record. Solver failures do not raise; the record carries
        the rejection reason and no proposal.
    """
    if len(indices) != BLOCK or len(set(indices)) != BLOCK:
        raise InputError(f"need {BLOCK} distinct indices, got {indices}")
    if eps < 0.0:
        raise InputError("eps must be >= 0")
    local = state.x[list(indices)].copy()
    pbar = power_sums(local, 4)
    k = int(rng.integers(BLOCK))
    y_k = local[k] + rng.uniform(-eps, eps)

    def _record(proposal: np.ndarray | None, reason: str | None) -> CurveMoveRecord:
        return CurveMoveRecord(
            indices=tuple(indices), local_sums=pbar, moved=k, current=local, proposal=proposal, reason=reason
        )

    if y_k < 0.0 or y_k > 1.0:
        return _record(None, "out-of-box")

    residual = pbar - np.array([y_k**i for i in range(1, 5)])
    solution = solve_quartic_in_box(newton_to_elementary(residual))
    if not solution.ok:
        return _record(None, solution.reason)

    others = [j for j in range(BLOCK) if j != k]
    proposal = np.empty(BLOCK)
    proposal[k] = y_k
    proposal[others] = solution.roots[rng.permutation(4)]
    if np.max(np.abs(power_sums(proposal, 4) - pbar)) > config.CURVE_RESIDUAL_TOL:
        return _record(None, "residual-check")
    return _record(proposal, None)


class IndexSchedule(Protocol):
    def indices(self, step: int, steps: int, rng: np.random.Generator) -> tuple[int, ...]:
        """Block for ``step`` (0-based) of a run of ``steps``."""

    def reversed(self) -> "IndexSchedule": ...


class RandomSubsets:
    """Uniform five-subsets; self-reversed."""

    def __init__(self, n: int) -> None:
        self.n = n

    def indices(self, step: int, steps: int, rng: np.random.Generator) -> tuple[int, ...]:
        return tuple(int(i) for i in np.sort(rng.choice(self.n, size=BLOCK, replace=False)))

    def reversed(self) -> "RandomSubsets":
        return self


def revolving_door(n: int, k: int) -> list[tuple[int, ...]]:
    """All k-subsets of range(n), consecutive ones differing by one swap."""
    if k == 0:
        return [()]
    if k == n:
        return [tuple(range(n))]
    head = revolving_door(n - 1, k)
    tail = [s + (n - 1,) for s in reversed(revolving_door(n - 1, k - 1))]
    return head + tail


class GraySubsets:
    """Systematic sweep of five-subsets in revolving-door order.

    A run of ``steps`` visits positions offset, offset + 1, ...; the reversed
    schedule visits the same positions last to first, which is the time
    reversal of the composed sweep.
    """

    def __init__(self, n: int, offset: int = 0, direction: int = 1) -> None:
        if math.comb(n, BLOCK) > 2_000_000:
            raise InputError(f"C({n}, {BLOCK}) subsets are too many to sweep")
        self.n = n
        self.offset = offset
        self.direction = direction

    @cached_property
    def order(self) -> list[tuple[int, ...]]:
        return revolving_door(self.n, BLOCK)

    def indices(self, step: int, steps: int, rng: np.random.Generator) -> tuple[int, ...]:
        pos = self.offset + step if self.direction > 0 else self.offset + steps - 1 - step
        return self.order[pos % len(self.order)]

    def reversed(self) -> "GraySubsets":
        twin = GraySubsets(self.n, self.offset, -self.direction)
        twin.__dict__["order"] = self.order
        return twin


def make_schedule(name: ScheduleName, n: int) -> IndexSchedule:
    if name == "random":
        return RandomSubsets(n)
    if name == "gray":
        return GraySubsets(n)
    raise InputError(f"unknown schedule {name!r}")


def block_log_target(values: np.ndarray, moved: int, rule: AcceptanceRule = "paper") -> float | None:
    """Per-rule log density of a five-value block; None where it degenerates.

    ``paper`` gives -log J4 / 2 with J4 the moment Gram determinant;
    ``arclength`` gives -log |V| over the four coordinates other than ``moved``.
    """
    if rule == "paper":
        if block_degenerate(values):
            return None
        _, det = gram_moment_matrix(values, 4)
        return -0.5 * math.log(det)
    if rule != "arclength":
        raise InputError(f"unknown acceptance rule {rule!r}")
    v = abs(vandermonde_product(np.delete(values, moved)))
    return -math.log(v) if v > 0.0 else None


def accept_move(
    current: np.ndarray,
    proposal: np.ndarray,
    moved: int,
    rule: AcceptanceRule,
    rng: np.random.Generator,
) -> str | None:
    """Metropolis decision for one curve move: None when accepted, else the rejection reason.

    Args:
        current: The five block values before the move.
        proposal: The five block values after the move.
        moved: Position of the perturbed coordinate within the block.
        rule: ``paper`` or ``arclength``.
        rng: Source of the single uniform draw.
    """
    log_x = block_log_target(current, moved, rule)
    log_y = block_log_target(proposal, moved, rule)
    if log_x is None:
        return "degenerate-current"
    if log_y is None:
        return "degenerate-jacobian"
    return None if metropolis_step(log_x, log_y, rng) else "metropolis"


class NeymanChain:
    """Chain on M_p with five-coordinate curve moves.

    ``acceptance="paper"`` accepts with min(1, sqrt(J4(x) / J4(y))).
    ``acceptance="arclength"`` accepts with min(1, |V(x)| / |V(y)|), V the
    Vandermonde product of the four solved coordinates; this is the exact
    Metropolis ratio for proposals uniform in the moved coordinate.
    """

    def __init__(
        self,
        n: int,
        eps: float | None = None,
        acceptance: AcceptanceRule = "paper",
        schedule: ScheduleName | IndexSchedule = "random",
    ) -> None:
        if n < BLOCK + 1:
            raise InputError(f"need n >= {BLOCK + 1} coordinates, got {n}")
        if acceptance not in ("paper", "arclength"):
            raise InputError(f"unknown acceptance rule {acceptance!r}")
        eps = config.NEYMAN_DEFAULT_EPS if eps is None else eps
        if eps < 0.0 or not math.isfinite(eps):
            raise InputError(f"eps must be finite and >= 0, got {eps}")
        self.n = n
        self.eps = float(eps)
        self.acceptance = acceptance
        self.schedule = make_schedule(schedule, n) if isinstance(schedule, str) else schedule

    def _choose(
        self, state: MomentState, step: int, steps: int, rng: np.random.Generator
    ) -> tuple[int, ...] | None:
        """A block with J4 > 0 at the current state; None for a degenerate sweep position."""
        if isinstance(self.schedule, RandomSubsets):
            for _ in range(config.INDEX_RETRY_CAP):
                idx = self.schedule.indices(step, steps, rng)
                if not block_degenerate(state.x[list(idx)]):
                    return idx
            raise DegeneracyError(f"no nondegenerate block in {config.INDEX_RETRY_CAP} draws")
        idx = self.schedule.indices(step, steps, rng)
        return None if block_degenerate(state.x[list(idx)]) else idx

    def step(
        self,
        state: MomentState,
        rng: np.random.Generator,
        step: int = 0,
        steps: int = 1,
    ) -> tuple[MomentState, CurveMoveRecord | None]:
        idx = self._choose(state, step, steps, rng)
        if idx is None:
            return state, None
        record = curve_move(state, idx, self.eps, rng)
        if record.proposal is None:
            return state, record
        reason = accept_move(record.current, record.proposal, record.moved, self.acceptance, rng)
        if reason is not None:
            return state, replace(record, reason=reason)
        return state.with_values(idx, record.proposal), replace(record, accepted=True)

    def _walk(self, state: MomentState, steps: int, rng: np.random.Generator) -> Iterator[tuple[int, MomentState, Counter[str]]]:
        counts: Counter[str] = Counter()
        for s in range(steps):
            state, record = self.step(state, rng, s, steps)
            if record is None:
                counts["degenerate-block"] += 1
            elif not record.accepted:
                counts[record.reason or "metropolis"] += 1
            if (s + 1) % config.MOMENT_RESYNC_EVERY == 0:
                state = state.resynced()
            yield s + 1, state, counts

    def advance(self, state: MomentState, steps: int, rng: np.random.Generator) -> tuple[MomentState, Counter[str]]:
        counts: Counter[str] = Counter()
        for _, state, counts in self._walk(state, steps, rng):
            pass
        return state, counts

    def run(self, state: MomentState, cfg: ChainConfig) -> Iterator[MomentState]:
        """Emit every ``thin``-th state after ``burn_in`` steps."""
        total = cfg.burn_in + cfg.steps
        logger.info("neyman chain: n=%d eps=%.4g rule=%s steps=%d", self.n, self.eps, self.acceptance, total)
        counts: Counter[str] = Counter()
        for s, current, counts in self._walk(state, total, cfg.rng(0)):
            if emits_at(s, cfg):
                yield current
        logger.info("neyman chain done: rejections %s", dict(sorted(counts.items())))

    def reversed(self) -> "NeymanChain":
        return NeymanChain(self.n, self.eps, self.acceptance, self.schedule.reversed())


def neyman_chain_step(
    state: MomentState,
    cfg: ChainConfig,
    rng: np.random.Generator,
    acceptance: AcceptanceRule = "paper",
) -> tuple[MomentState, CurveMoveRecord | None]:
    """One uniform-block step with half-width ``cfg.eps``."""
    return NeymanChain(state.n, cfg.eps, acceptance).step(state, rng)


"""Chain configuration, seeding and the emission schedule shared by all chains."""

from __future__ import annotations

from collections import Counter
from typing import Protocol, TypeVar

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

StateT = TypeVar("StateT")

MAX_SEED = 2**64 - 1


class ChainConfig(BaseModel):
    """Deterministic replay contract for one chain run.

    ``steps`` counts post-burn-in transitions; every ``thin``-th of them is
    emitted, ``steps // thin`` states in total.
    """

    model_config = ConfigDict(frozen=True)

    seed: int = Field(default=0, ge=0, le=MAX_SEED, description="Root seed of every derived stream")
    eps: float | None = Field(default=None, ge=0.0, description="Proposal half-width; None selects the sampler default")
    steps: int = Field(default=10_000, ge=0, description="Post-burn-in transitions")
    burn_in: int = Field(default=1_000, ge=0, description="Transitions discarded before emission")
    thin: int = Field(default=1, ge=1, description="Emit every thin-th post-burn-in state")

    @property
    def emissions(self) -> int:
        return self.steps // self.thin

    def rng(self, *keys: int) -> np.random.Generator:
        return derive_rng(self.seed, *keys)


def derive_rng(seed: int, *keys: int) -> np.random.Generator:
    """Independent reproducible stream for (seed, key, ...), e.g. a replicate index."""
    return np.random.default_rng(np.random.SeedSequence([int(seed), *(int(k) for k in keys)]))


def emits_at(step: int, cfg: ChainConfig) -> bool:
    """True when transition number ``step`` (1-based) produces an emission."""
    post = step - cfg.burn_in
    return post > 0 and post % cfg.thin == 0 and post <= cfg.steps


class ReversibleChain(Protocol[StateT]):
    """What the serial test needs from a chain.

    ``advance`` runs ``steps`` transitions and reports rejection reasons;
    ``reversed`` returns the time-reversed chain, or None when unavailable.
    """

    def advance(self, state: StateT, steps: int, rng: np.random.Generator) -> tuple[StateT, Counter[str]]: ...

    def reversed(self) -> "ReversibleChain[StateT] | None": ...


def merge_counts(counts: list[Counter[str]]) -> dict[str, int]:
    """Deterministic (sorted) union of rejection counters."""
    total: Counter[str] = Counter()
    for c in counts:
        total.update(c)
    return {k: int(total[k]) for k in sorted(total)}

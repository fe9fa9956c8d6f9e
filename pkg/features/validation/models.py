"""Report schema for rank-based conditional tests."""

from __future__ import annotations

from typing import Any, ClassVar, Literal

from pydantic import BaseModel, ConfigDict, Field, model_validator


class TestReport(BaseModel):
    """Observed statistic, replicate statistics, rank and p-value, with provenance."""

    __test__: ClassVar[bool] = False

    model_config = ConfigDict(frozen=True)

    statistic_name: str = Field(description="Name of the test statistic")
    statistic_observed: float = Field(description="Statistic on the observed state")
    statistic_replicates: list[float] = Field(description="Statistic on each of the B replicates")
    rank: int = Field(ge=1, description="Position of the observed statistic, 1 = largest")
    p_value: float = Field(gt=0.0, le=1.0, description="rank / (B + 1), upper tail")
    tie_policy: Literal["random"] = Field(default="random", description="Ties broken by a uniform draw")
    seed: int = Field(description="Root seed for replay")
    steps: int = Field(ge=0, description="Chain steps T per half-run")
    replicates: int = Field(ge=1, description="Number of replicates B")
    scheme: Literal["besag", "chain", "iid"] = Field(description="How the replicates were produced")
    rejection_counts: dict[str, int] = Field(default_factory=dict, description="Rejections by reason")
    classical_psi2: dict[str, float] | None = Field(
        default=None, description="Asymptotic smooth-test statistic and chi-square p-value"
    )
    metadata: dict[str, Any] = Field(default_factory=dict, description="Sampler parameters")

    @model_validator(mode="after")
    def _rank_consistent(self) -> "TestReport":
        b = len(self.statistic_replicates)
        if b != self.replicates:
            raise ValueError(f"{b} replicate statistics for B = {self.replicates}")
        if self.rank > b + 1:
            raise ValueError(f"rank {self.rank} exceeds B + 1 = {b + 1}")
        if abs(self.p_value - self.rank / (b + 1)) > 1e-12:
            raise ValueError("p_value must equal rank / (B + 1)")
        return self

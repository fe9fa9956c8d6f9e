"""CLI settings and the resolved run configuration embedded in every output."""

from __future__ import annotations

from pathlib import Path
from typing import Any, Literal

from pydantic import BaseModel, ConfigDict, Field
from pydantic_settings import BaseSettings, SettingsConfigDict

from core.chain import MAX_SEED


class CliSettings(BaseSettings):
    """Environment-driven defaults (``MS_`` prefix, ``.env`` file)."""

    model_config = SettingsConfigDict(
        env_prefix="MS_",
        env_file=".env",
        env_file_encoding="utf-8",
        extra="ignore",
    )

    log_level: str = Field(default="WARNING", description="Level for the core/features/cli loggers")
    default_seed: int = Field(default=0, ge=0, le=MAX_SEED, description="Seed used when --seed is omitted")
    workers: int = Field(default=1, ge=1, description="Threads for independent replicate runs")


class RunConfig(BaseModel):
    """Everything needed to replay one invocation."""

    model_config = ConfigDict(frozen=True)

    subcommand: Literal["torus", "gamma", "neyman", "pitfall", "validate"]
    params: dict[str, Any] = Field(default_factory=dict, description="Subcommand parameters after defaults")
    seed: int = Field(ge=0, le=MAX_SEED)
    out: Path
    format: Literal["csv", "json"]

    def embed(self) -> dict[str, Any]:
        return self.model_dump(mode="json")

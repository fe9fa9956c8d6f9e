"""Data models for the curved torus."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

from core.errors import InputError

SampleMethod = Literal["area", "naive"]


@dataclass(frozen=True)
class TorusParams:
    """Major radius R and minor radius r, with R > r > 0."""

    R: float
    r: float

    def __post_init__(self) -> None:
        if not (self.R > self.r > 0.0):
            raise InputError(f"torus needs R > r > 0, got R={self.R}, r={self.r}")

    @property
    def ratio(self) -> float:
        return self.r / self.R


@dataclass(frozen=True)
class TorusSample:
    """One sampled point: chart angles, embedded point, and how it was drawn."""

    theta: float
    psi: float
    point: tuple[float, float, float]
    method: SampleMethod

    def as_row(self) -> tuple[float, float, float, float, float, str]:
        x, y, z = self.point
        return (self.theta, self.psi, x, y, z, self.method)

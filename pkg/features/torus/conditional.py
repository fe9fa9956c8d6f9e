"""Conditional law of area measure on the slice x = 0 of the torus."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

from core.errors import InputError
from core.geometry import (
    DerivativeMatrix,
    JacobianValue,
    coarea_conditional_unnormalized,
    fiber_normalizer,
    gram_jacobian,
)
from features.torus.models import TorusParams

logger = logging.getLogger(__name__)

SLICE_BRANCHES = (math.pi / 2.0, 3.0 * math.pi / 2.0)


@dataclass(frozen=True)
class SliceCheckReport:
    """Constancy of p / J Phi on both branches of Phi^-1(0), and their masses."""

    grid: int
    max_relative_deviation: float
    branch_masses: tuple[float, float]
    level: float

    def to_dict(self) -> dict:
        return {
            "grid": self.grid,
            "max_relative_deviation": self.max_relative_deviation,
            "branch_masses": list(self.branch_masses),
            "level": self.level,
        }


def torus_phi_jacobian(theta: float, psi: float, params: TorusParams) -> JacobianValue:
    """J Phi for Phi(theta, psi) = (R + r cos theta) cos psi, a 1 x 2 derivative."""
    ring = params.R + params.r * math.cos(theta)
    d = DerivativeMatrix(
        np.array([[-params.r * math.sin(theta) * math.cos(psi), -ring * math.sin(psi)]]),
        params_on="cols",
    )
    return gram_jacobian(d)


def pulled_back_area_density(theta: float, params: TorusParams) -> float:
    """(R + r cos theta) / R, area measure in chart coordinates up to a constant."""
    return (params.R + params.r * math.cos(theta)) / params.R


def conditional_slice_check(params: TorusParams, grid: int = 1000) -> SliceCheckReport:
    """Co-area conditional along the two branches of the slice: its flatness and each branch's share of mass."""
    if grid < 2:
        raise InputError("grid must be >= 2")
    thetas = np.linspace(0.0, 2.0 * math.pi, grid)
    spacing = float(thetas[1] - thetas[0])

    branches: list[np.ndarray] = []
    for psi in SLICE_BRANCHES:
        values = np.array(
            [
                coarea_conditional_unnormalized(
                    pulled_back_area_density(t, params),
                    torus_phi_jacobian(t, psi, params),
                )
                for t in thetas
            ]
        )
        branches.append(values)

    stacked = np.concatenate(branches)
    level = float(np.mean(stacked))
    deviation = float(np.max(np.abs(stacked - level)) / level)

    masses = [fiber_normalizer(v, spacing) for v in branches]
    total = sum(masses)
    report = SliceCheckReport(
        grid=grid,
        max_relative_deviation=deviation,
        branch_masses=(masses[0] / total, masses[1] / total),
        level=level,
    )
    logger.debug("slice check: deviation=%.3e masses=%s", deviation, report.branch_masses)
    return report

"""Finite neighborhood systems and transition matrices."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from core.errors import InputError

ROW_SUM_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class NeighborhoodSystem:
    """Target pi on vertices 0..n-1 and a symmetric neighborhood N_x per vertex."""

    pi: np.ndarray
    neighborhoods: tuple[frozenset[int], ...]

    def __post_init__(self) -> None:
        pi = np.asarray(self.pi, dtype=float).ravel()
        object.__setattr__(self, "pi", pi)
        n = pi.size
        if len(self.neighborhoods) != n:
            raise InputError(f"{len(self.neighborhoods)} neighborhoods for {n} vertices")
        if np.any(pi <= 0.0) or abs(pi.sum() - 1.0) > 1e-12:
            raise InputError("pi must be positive and sum to 1")
        for x, nx in enumerate(self.neighborhoods):
            if not nx:
                raise InputError(f"N_{x} is empty")
            for y in nx:
                if not 0 <= y < n:
                    raise InputError(f"N_{x} contains unknown vertex {y}")
                if x not in self.neighborhoods[y]:
                    raise InputError(f"{y} in N_{x} but {x} not in N_{y}")

    @property
    def n(self) -> int:
        return int(self.pi.size)

    def neighborhood_mass(self) -> np.ndarray:
        """pi(N_x) for every x."""
        return np.array([self.pi[sorted(nx)].sum() for nx in self.neighborhoods])


@dataclass(frozen=True, eq=False)
class KernelMatrix:
    """Row-stochastic transition matrix."""

    matrix: np.ndarray

    def __post_init__(self) -> None:
        k = np.asarray(self.matrix, dtype=float)
        if k.ndim != 2 or k.shape[0] != k.shape[1]:
            raise InputError(f"kernel must be square, got shape {k.shape}")
        if np.any(k < 0.0):
            raise InputError("kernel has negative entries")
        if np.max(np.abs(k.sum(axis=1) - 1.0)) > ROW_SUM_TOL:
            raise InputError("kernel rows must sum to 1")
        object.__setattr__(self, "matrix", k)

    @property
    def size(self) -> int:
        return int(self.matrix.shape[0])

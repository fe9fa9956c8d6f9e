"""Power sums, Newton's identities, the boxed quartic solve and the moment Gram matrix."""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations

import numpy as np

import config
from core.errors import InputError


def power_sums(x: np.ndarray, m: int) -> np.ndarray:
    """(sum x_j, sum x_j^2, ..., sum x_j^m) with compensated summation."""
    if m < 1:
        raise InputError("m must be >= 1")
    x = np.asarray(x, dtype=float).ravel()
    return np.array([math.fsum(x**i) for i in range(1, m + 1)])


def newton_to_elementary(p: np.ndarray) -> np.ndarray:
    """Elementary symmetric e_1..e_k from power sums p_1..p_k.

    e_k = (1/k) sum_{i=1..k} (-1)^(i-1) e_{k-i} p_i, e_0 = 1.
    """
    p = np.asarray(p, dtype=float).ravel()
    e = [1.0]
    for k in range(1, p.size + 1):
        terms = [(-1.0) ** (i - 1) * e[k - i] * p[i - 1] for i in range(1, k + 1)]
        e.append(math.fsum(terms) / k)
    return np.array(e[1:])


def elementary_from_roots(roots: np.ndarray) -> np.ndarray:
    coeffs = np.poly(np.asarray(roots, dtype=float))
    signs = np.array([(-1.0) ** k for k in range(1, coeffs.size)])
    return signs * coeffs[1:]


@dataclass(frozen=True, eq=False)
class QuarticSolution:
    """Four roots in [0, 1] (sorted), or the reason there are none."""

    roots: np.ndarray | None
    reason: str | None = None

    @property
    def ok(self) -> bool:
        return self.roots is not None


def _polish(coeffs: np.ndarray, z: np.ndarray, steps: int) -> np.ndarray:
    deriv = np.polyder(coeffs)
    out = z.astype(complex)
    for _ in range(steps):
        f = np.polyval(coeffs, out)
        df = np.polyval(deriv, out)
        safe = np.abs(df) > 0.0
        trial = out.copy()
        trial[safe] = out[safe] - f[safe] / df[safe]
        better = np.isfinite(trial) & (np.abs(np.polyval(coeffs, trial)) <= np.abs(f))
        out = np.where(better, trial, out)
    return out


def _clusters(z: np.ndarray, radius: float) -> list[tuple[complex, int]]:
    """Groups of roots chained within ``radius`` of one another, as (mean, size)."""
    n = z.size
    label = list(range(n))

    def find(i: int) -> int:
        while label[i] != i:
            label[i] = label[label[i]]
            i = label[i]
        return i

    for i, j in combinations(range(n), 2):
        if abs(z[i] - z[j]) <= radius:
            label[find(i)] = find(j)
    groups: dict[int, list[int]] = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    return [(complex(np.mean(z[members])), len(members)) for members in groups.values()]


def _merged_roots(coeffs: np.ndarray, raw: np.ndarray) -> np.ndarray:
    """Each cluster of k raw roots becomes one root of multiplicity k.

    The cluster mean is well conditioned where the individual roots are not.
    A root of multiplicity k is a simple root of the (k-1)-th derivative, so
    that is the polynomial the mean is polished on.
    """
    out: list[complex] = []
    for mean, k in _clusters(raw, config.QUARTIC_CLUSTER_RADIUS):
        target = np.polyder(coeffs, k - 1) if k > 1 else coeffs
        root = _polish(target, np.array([mean]), config.QUARTIC_POLISH_STEPS)[0]
        out.extend([root] * k)
    return np.array(out)


def solve_quartic_in_box(e: np.ndarray) -> QuarticSolution:
    """Roots of t^4 - e1 t^3 + e2 t^2 - e3 t + e4, all real and in [0, 1], or a failure.

    Args:
        e: Elementary symmetric values (e1, e2, e3, e4).

    Returns:
        Sorted roots clipped to [0, 1], or ``reason`` set to ``complex-roots``
        or ``out-of-box``.

    Companion-matrix eigenvalues are polished by Newton steps. Repeated roots
    come back from the eigenvalue solver as a spread of tiny complex values;
    when any appear, the raw roots are merged into clusters before polishing
    and kept only if the merged roots reproduce e.
    """
    e = np.asarray(e, dtype=float).ravel()
    if e.size != 4 or not np.all(np.isfinite(e)):
        raise InputError("e must be a finite 4-vector")
    scale = max(1.0, float(np.max(np.abs(e))))
    tol_root = config.QUARTIC_ROOT_TOL * scale
    coeffs = np.array([1.0, -e[0], e[1], -e[2], e[3]])

    raw = np.roots(coeffs)
    if np.max(np.abs(raw.imag)) <= tol_root:
        z = _polish(coeffs, raw, config.QUARTIC_POLISH_STEPS)
    else:
        z = _merged_roots(coeffs, raw)
        if np.max(np.abs(z.imag)) > tol_root:
            return QuarticSolution(None, "complex-roots")
        if np.max(np.abs(elementary_from_roots(z.real) - e)) > tol_root:
            return QuarticSolution(None, "complex-roots")

    roots = np.sort(z.real)
    slack = config.QUARTIC_BOX_SLACK
    if roots[0] < -slack or roots[-1] > 1.0 + slack:
        return QuarticSolution(None, "out-of-box")
    return QuarticSolution(np.clip(roots, 0.0, 1.0))


def gram_moment_matrix(y: np.ndarray, m: int = 4) -> tuple[np.ndarray, float]:
    """m x m Gram matrix with (i, j) entry i j pbar_{i+j-2} (pbar_0 = len(y)) and its determinant.

    The determinant comes from the R factor of the derivative matrix with
    columns 1, 2y, ..., m y^(m-1), not from the Gram entries.
    """
    y = np.asarray(y, dtype=float).ravel()
    pbar = np.concatenate(([float(y.size)], power_sums(y, 2 * m - 2))) if m > 1 else np.array([float(y.size)])
    i = np.arange(1, m + 1)
    gram = np.outer(i, i) * pbar[np.add.outer(i, i) - 2]
    deriv = np.column_stack([k * y ** (k - 1) for k in range(1, m + 1)])
    if _distinct_count(y) < m:
        return gram, 0.0
    r = np.linalg.qr(deriv, mode="r")
    det = float(np.prod(np.diag(r)) ** 2)
    return gram, det


def _distinct_count(values: np.ndarray) -> int:
    v = np.asarray(values, dtype=float).ravel()
    if v.size == 0:
        return 0
    return 1 + int(np.sum(np.diff(np.sort(v)) > config.DISTINCT_TOL))


def block_degenerate(values: np.ndarray) -> bool:
    """J_4 vanishes exactly when fewer than four values are distinct."""
    return _distinct_count(values) < 4


def vandermonde_product(v: np.ndarray) -> float:
    """prod_{i<j} (v_j - v_i)."""
    v = np.asarray(v, dtype=float).ravel()
    return math.prod(float(v[j] - v[i]) for i, j in combinations(range(v.size), 2))


@dataclass(frozen=True)
class RankDiagnostic:
    rank: int
    distinct_count: int
    near_diagonal: bool
    near_boundary: bool


def rank_diagnostic(x: np.ndarray) -> RankDiagnostic:
    """Rank of the 4 x n matrix with rows 1, x, x^2, x^3; distinct values at
    1e-9 (configurable); whether x is near the generalized diagonal or the
    box boundary."""
    x = np.asarray(x, dtype=float).ravel()
    tol = config.DISTINCT_TOL
    if x.size == 0:
        return RankDiagnostic(rank=0, distinct_count=0, near_diagonal=False, near_boundary=False)
    rows = np.vstack([x**k for k in range(4)])
    rank = int(np.linalg.matrix_rank(rows))
    gaps = np.diff(np.sort(x))
    distinct = _distinct_count(x)
    return RankDiagnostic(
        rank=rank,
        distinct_count=distinct,
        near_diagonal=bool(np.any(gaps <= tol)),
        near_boundary=bool(np.any(x <= tol) or np.any(x >= 1.0 - tol)),
    )

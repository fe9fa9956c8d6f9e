"""How not to sample: the neighborhood kernel and its Metropolized correction.

Proposing y from N_x in proportion to pi(y) gives a chain reversible for
sigma(x) = pi(N_x) pi(x) / z, which is pi only when pi(N_x) is constant.
"""

from __future__ import annotations

import logging
import math
from collections import deque
from dataclasses import asdict, dataclass

import numpy as np
from scipy.sparse import csgraph, csr_matrix

import config
from core.errors import ConvergenceError, InputError, StructureError
from features.pitfall.models import KernelMatrix, NeighborhoodSystem

logger = logging.getLogger(__name__)

ROUNDING = 1e-12


def neighborhood_kernel(sys: NeighborhoodSystem) -> KernelMatrix:
    """K(x, y) = pi(y) / pi(N_x) for y in N_x, else 0."""
    k = np.zeros((sys.n, sys.n))
    mass = sys.neighborhood_mass()
    for x, nx in enumerate(sys.neighborhoods):
        ys = sorted(nx)
        k[x, ys] = sys.pi[ys] / mass[x]
    return KernelMatrix(k)


def metropolized_neighborhood_kernel(sys: NeighborhoodSystem) -> KernelMatrix:
    """M(x, y) = pi(y) min(1/pi(N_x), 1/pi(N_y)) off the diagonal; the rest stays at x."""
    mass = sys.neighborhood_mass()
    m = np.zeros((sys.n, sys.n))
    for x, nx in enumerate(sys.neighborhoods):
        for y in nx:
            if y != x:
                m[x, y] = sys.pi[y] * min(1.0 / mass[x], 1.0 / mass[y])
        residual = 1.0 - math.fsum(m[x])
        if residual < -ROUNDING:
            raise AssertionError(f"negative holding mass {residual} at vertex {x}")
        m[x, x] = max(residual, 0.0)
    return KernelMatrix(m)


def kernel_period(k: KernelMatrix) -> int:
    """gcd of level[u] + 1 - level[v] over edges u -> v of a BFS from vertex 0."""
    adj = k.matrix > 0.0
    level = [-1] * k.size
    level[0] = 0
    queue = deque([0])
    while queue:
        u = queue.popleft()
        for v in np.flatnonzero(adj[u]):
            if level[v] < 0:
                level[v] = level[u] + 1
                queue.append(int(v))
    period = 0
    for u, v in zip(*np.nonzero(adj)):
        if level[u] >= 0 and level[v] >= 0:
            period = math.gcd(period, abs(level[u] + 1 - level[v]))
    return period


def check_structure(k: KernelMatrix) -> None:
    n_comp, _ = csgraph.connected_components(csr_matrix(k.matrix > 0.0), directed=True, connection="strong")
    if n_comp != 1:
        raise StructureError(f"kernel is reducible ({n_comp} communicating classes)")
    period = kernel_period(k)
    if period != 1:
        raise StructureError(f"kernel is periodic with period {period}")


def stationary_distribution(k: KernelMatrix) -> np.ndarray:
    """Left fixed vector by power iteration from the uniform vector."""
    check_structure(k)
    sigma = np.full(k.size, 1.0 / k.size)
    for it in range(1, config.POWER_ITERATION_MAX + 1):
        nxt = sigma @ k.matrix
        nxt /= nxt.sum()
        delta = float(np.abs(nxt - sigma).sum())
        sigma = nxt
        if delta < config.POWER_ITERATION_TOL:
            break
    residual = float(np.abs(sigma @ k.matrix - sigma).sum())
    if residual >= config.STATIONARY_RESIDUAL_MAX:
        raise ConvergenceError(f"power iteration residual {residual:.3e} after {it} iterations")
    logger.debug("power iteration converged in %d iterations (residual %.2e)", it, residual)
    return sigma


def detailed_balance_error(k: KernelMatrix, weights: np.ndarray) -> float:
    """max |w(x) K(x, y) - w(y) K(y, x)|."""
    flux = np.asarray(weights, dtype=float)[:, None] * k.matrix
    return float(np.max(np.abs(flux - flux.T)))


@dataclass(frozen=True)
class PitfallReport:
    pi: list[float]
    sigma_formula: list[float]
    sigma_empirical: list[float]
    formula_error: float
    bias: float
    neighborhood_mass_constant: bool
    detailed_balance_error: float
    metropolized_stationary: list[float]
    metropolized_error: float
    metropolized_ok: bool

    def to_dict(self) -> dict:
        return asdict(self)


def verify_pitfall(sys: NeighborhoodSystem) -> PitfallReport:
    """Compare the stationary law of the neighborhood kernel with pi and with the mass-weighted formula.

    Args:
        sys: Graph, target pi and neighborhoods.

    Returns:
        Report with the empirical and predicted laws, the bias against pi,
        and whether the Metropolized kernel recovers pi.
    """
    kernel = neighborhood_kernel(sys)
    empirical = stationary_distribution(kernel)
    mass = sys.neighborhood_mass()
    formula = mass * sys.pi
    formula /= formula.sum()

    corrected = metropolized_neighborhood_kernel(sys)
    corrected_stationary = stationary_distribution(corrected)
    corrected_error = float(np.abs(corrected_stationary - sys.pi).sum())

    report = PitfallReport(
        pi=sys.pi.tolist(),
        sigma_formula=formula.tolist(),
        sigma_empirical=empirical.tolist(),
        formula_error=float(np.abs(empirical - formula).sum()),
        bias=float(np.abs(empirical - sys.pi).sum()),
        neighborhood_mass_constant=bool(np.ptp(mass) <= 1e-12),
        detailed_balance_error=detailed_balance_error(kernel, formula),
        metropolized_stationary=corrected_stationary.tolist(),
        metropolized_error=corrected_error,
        metropolized_ok=corrected_error < 1e-10,
    )
    logger.info("pitfall: n=%d bias=%.6f formula_error=%.2e", sys.n, report.bias, report.formula_error)
    return report


def path_system(n: int = 3, closed: bool = True, pi: np.ndarray | None = None) -> NeighborhoodSystem:
    """Path 0 - 1 - ... - (n-1) with 1-ball neighborhoods (closed balls contain x)."""
    if n < 2:
        raise InputError("path needs at least 2 vertices")
    pi = np.full(n, 1.0 / n) if pi is None else np.asarray(pi, dtype=float)
    hoods = []
    for x in range(n):
        nx = {y for y in (x - 1, x + 1) if 0 <= y < n}
        if closed:
            nx.add(x)
        hoods.append(frozenset(nx))
    return NeighborhoodSystem(pi=pi, neighborhoods=tuple(hoods))


def random_system(n: int, rng: np.random.Generator, closed: bool = True, extra_edges: int | None = None) -> NeighborhoodSystem:
    """Random spanning tree plus extra edges, Dirichlet(2) target.

    Open neighborhoods get a triangle on 0, 1, 2 so the kernel is aperiodic.
    """
    if n < 3:
        raise InputError("random systems need at least 3 vertices")
    edges: set[tuple[int, int]] = set()
    for v in range(1, n):
        u = int(rng.integers(v))
        edges.add((u, v))
    for _ in range(n // 2 if extra_edges is None else extra_edges):
        u, v = sorted(int(a) for a in rng.choice(n, size=2, replace=False))
        edges.add((u, v))
    if not closed:
        edges.update({(0, 1), (1, 2), (0, 2)})
    hoods: list[set[int]] = [({x} if closed else set()) for x in range(n)]
    for u, v in edges:
        hoods[u].add(v)
        hoods[v].add(u)
    pi = rng.dirichlet(np.full(n, 2.0))
    pi = pi / pi.sum()
    return NeighborhoodSystem(pi=pi, neighborhoods=tuple(frozenset(h) for h in hoods))

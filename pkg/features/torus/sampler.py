"""Area-measure and naive samplers on the curved torus.

The torus f(theta, psi) has area Jacobian r (R + r cos theta), so uniform area
measure pulls back to g(theta, psi) = (1 + (r/R) cos theta) / (4 pi^2): psi is
uniform and theta has marginal g1(theta) = (1 + (r/R) cos theta) / (2 pi).
"""

from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from typing import Literal

import numpy as np
from scipy import integrate

from core.chain import derive_rng
from core.errors import InputError
from core.geometry import DerivativeMatrix, gram_jacobian
from features.torus.models import TorusParams, TorusSample

logger = logging.getLogger(__name__)

TWO_PI = 2.0 * math.pi
Envelope = Literal["paper", "tight"]


def torus_embed(theta: float, psi: float, params: TorusParams) -> np.ndarray:
    """Embedded point ((R + r cos t) cos p, (R + r cos t) sin p, r sin t)."""
    theta = math.fmod(theta, TWO_PI)
    psi = math.fmod(psi, TWO_PI)
    ring = params.R + params.r * math.cos(theta)
    return np.array([ring * math.cos(psi), ring * math.sin(psi), params.r * math.sin(theta)])


def torus_derivative(theta: float, psi: float, params: TorusParams) -> DerivativeMatrix:
    """3 x 2 derivative of the embedding; columns are d/dtheta, d/dpsi."""
    R, r = params.R, params.r
    st, ct = math.sin(theta), math.cos(theta)
    sp, cp = math.sin(psi), math.cos(psi)
    ring = R + r * ct
    return DerivativeMatrix(
        np.array(
            [
                [-r * st * cp, -ring * sp],
                [-r * st * sp, ring * cp],
                [r * ct, 0.0],
            ]
        ),
        params_on="cols",
    )


def area_jacobian(theta: float, psi: float, params: TorusParams) -> float:
    return gram_jacobian(torus_derivative(theta, psi, params)).value


def theta_density(theta: float | np.ndarray, params: TorusParams) -> float | np.ndarray:
    """Marginal g1 of theta under area measure."""
    return (1.0 + params.ratio * np.cos(theta)) / TWO_PI


def theta_cdf(theta: float | np.ndarray, params: TorusParams) -> float | np.ndarray:
    """(theta + (r/R) sin theta) / (2 pi) on [0, 2 pi]."""
    arr = np.asarray(theta, dtype=float)
    if np.any(arr < 0.0) or np.any(arr > TWO_PI):
        raise InputError("theta_cdf is defined on [0, 2*pi]")
    out = np.clip((arr + params.ratio * np.sin(arr)) / TWO_PI, 0.0, 1.0)
    return float(out) if out.ndim == 0 else out


def envelope_height(params: TorusParams, envelope: Envelope) -> float:
    if envelope == "paper":
        return 1.0 / math.pi
    if envelope == "tight":
        return (1.0 + params.ratio) / TWO_PI
    raise InputError(f"unknown envelope {envelope!r}")


def rejection_theta(
    n: int,
    params: TorusParams,
    envelope: Envelope,
    rng: np.random.Generator,
) -> tuple[np.ndarray, int]:
    """Exactly n draws from g1 under a constant box envelope, plus the proposal count."""
    if n < 1:
        raise InputError("n must be >= 1")
    height = envelope_height(params, envelope)
    out = np.empty(n)
    filled = 0
    proposals = 0
    while filled < n:
        k = n - filled
        theta = rng.uniform(0.0, TWO_PI, size=k)
        eta = rng.uniform(0.0, height, size=k)
        proposals += k
        accepted = theta[eta < theta_density(theta, params)]
        out[filled : filled + accepted.size] = accepted
        filled += accepted.size
    return out, proposals


def _samples(theta: np.ndarray, psi: np.ndarray, params: TorusParams, method: str) -> list[TorusSample]:
    ring = params.R + params.r * np.cos(theta)
    xs = ring * np.cos(psi)
    ys = ring * np.sin(psi)
    zs = params.r * np.sin(theta)
    return [
        TorusSample(theta=float(t), psi=float(p), point=(float(x), float(y), float(z)), method=method)
        for t, p, x, y, z in zip(theta, psi, xs, ys, zs)
    ]


def sample_torus_area(
    n: int,
    params: TorusParams,
    envelope: Envelope = "tight",
    rng: np.random.Generator | None = None,
) -> list[TorusSample]:
    """n points from normalized area measure on the torus.

    Args:
        n: Number of points.
        params: Radii with 0 < r < R.
        envelope: ``tight`` box (1 + r/R) / (2 pi) or the looser ``paper`` box 1/pi.
        rng: Random stream; sample i draws its psi, then its theta proposals,
            before sample i + 1 starts.

    Returns:
        The samples in draw order.
    """
    rng = rng if rng is not None else np.random.default_rng()
    if n < 1:
        raise InputError("n must be >= 1")
    height = envelope_height(params, envelope)
    ratio = params.ratio
    theta = np.empty(n)
    psi = np.empty(n)
    proposals = 0
    for i in range(n):
        psi[i] = rng.uniform(0.0, TWO_PI)
        while True:
            t = rng.uniform(0.0, TWO_PI)
            eta = rng.uniform(0.0, height)
            proposals += 1
            if eta < (1.0 + ratio * math.cos(t)) / TWO_PI:
                theta[i] = t
                break
    logger.debug("torus rejection: %d accepted of %d proposals (%s envelope)", n, proposals, envelope)
    return _samples(theta, psi, params, "area")


def sample_torus_naive(n: int, params: TorusParams, rng: np.random.Generator | None = None) -> list[TorusSample]:
    """Both angles uniform: the wrong answer, kept for comparison."""
    rng = rng if rng is not None else np.random.default_rng()
    if n < 1:
        raise InputError("n must be >= 1")
    theta = rng.uniform(0.0, TWO_PI, size=n)
    psi = rng.uniform(0.0, TWO_PI, size=n)
    return _samples(theta, psi, params, "naive")


def sample_torus_area_sharded(
    n: int,
    params: TorusParams,
    seed: int,
    shards: int = 4,
    envelope: Envelope = "tight",
    max_workers: int | None = None,
) -> list[TorusSample]:
    """Split n across shards with streams derived from (seed, shard); concatenated by shard index."""
    if shards < 1:
        raise InputError("shards must be >= 1")
    sizes = [n // shards + (1 if i < n % shards else 0) for i in range(shards)]
    jobs = [(i, size) for i, size in enumerate(sizes) if size > 0]

    def _run(job: tuple[int, int]) -> list[TorusSample]:
        index, size = job
        return sample_torus_area(size, params, envelope, derive_rng(seed, index))

    with ThreadPoolExecutor(max_workers=max_workers) as pool:
        parts = list(pool.map(_run, jobs))
    return [s for part in parts for s in part]


def torus_surface_area(params: TorusParams) -> float:
    """Quadrature of J2 f over the parameter square; equals 4 pi^2 r R."""
    inner, _ = integrate.quad(lambda t: params.r * (params.R + params.r * math.cos(t)), 0.0, TWO_PI, epsabs=0.0, epsrel=1e-13)
    return TWO_PI * inner


def mc_surface_area(n: int, params: TorusParams, rng: np.random.Generator) -> float:
    """Monte Carlo estimate: 4 pi^2 times the mean Jacobian at uniform parameters."""
    theta = rng.uniform(0.0, TWO_PI, size=n)
    jac = params.r * (params.R + params.r * np.cos(theta))
    return TWO_PI * TWO_PI * float(np.mean(jac))

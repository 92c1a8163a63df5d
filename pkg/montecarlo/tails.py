from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np
from numpy.typing import ArrayLike

from common.errors import ParameterError
from geometry.lattice import cached_lattice
from montecarlo.estimation import wilson_interval
from montecarlo.seeding import LINK_POWER_STREAM, SHOT_NOISE_STREAM, rng_for
from netmodel.antennas import sample_link_power
from netmodel.params import SimParams
from observability.metrics import TAIL_SAMPLES

logger = logging.getLogger(__name__)

CHUNK = 1_000_000
POINTS_PER_BATCH = 2_000_000


@dataclass(frozen=True)
class TailCurve:
    x: tuple[float, ...]
    p_hat: tuple[float, ...]
    ci_lo: tuple[float, ...]
    ci_hi: tuple[float, ...]
    n: int

    @classmethod
    def from_exceedances(cls, x_grid: np.ndarray, exceed: np.ndarray, n: int) -> TailCurve:
        bands = [wilson_interval(int(k), n) for k in exceed]
        return cls(
            x=tuple(float(v) for v in x_grid),
            p_hat=tuple(float(k) / n for k in exceed),
            ci_lo=tuple(lo for lo, _ in bands),
            ci_hi=tuple(hi for _, hi in bands),
            n=n,
        )


def _check_grid(x_grid: ArrayLike) -> np.ndarray:
    grid = np.asarray(x_grid, dtype=float).reshape(-1)
    if np.any(grid < 0) or np.any(np.diff(grid) <= 0):
        raise ParameterError("x grid must be non-negative and strictly increasing")
    return grid


def exceedance_counts(samples: np.ndarray, x_grid: np.ndarray) -> np.ndarray:
    ordered = np.sort(samples)
    return len(ordered) - np.searchsorted(ordered, x_grid, side="right")


def estimate_link_power_tail(
    params: SimParams,
    x_grid: ArrayLike,
    n: int,
    rng: np.random.Generator | None = None,
) -> TailCurve:
    grid = _check_grid(x_grid)
    if rng is None:
        rng = rng_for(params.seed, LINK_POWER_STREAM)
    exceed = np.zeros(len(grid), dtype=np.int64)
    done = 0
    while done < n:
        size = min(CHUNK, n - done)
        exceed += exceedance_counts(sample_link_power(params, rng, size), grid)
        done += size
    TAIL_SAMPLES.labels("link_power").inc(n)
    return TailCurve.from_exceedances(grid, exceed, n)


def truncated_shot_noise(distances: ArrayLike, marks: ArrayLike, r: float, alpha: float) -> float:
    d = np.asarray(distances, dtype=float)
    w = np.asarray(marks, dtype=float)
    outside = d >= r
    return float(np.sum(w[outside] * d[outside] ** (-alpha)))


def sample_truncated_shot_noise_batch(
    params: SimParams,
    r: float,
    rng: np.random.Generator,
    size: int,
    outer: float | None = None,
) -> np.ndarray:
    """``size`` independent draws of the shot noise at the origin from the annulus r <= |Y| < outer."""
    if not r > 0:
        raise ParameterError(f"truncation radius must be positive, got {r}")
    outer = params.window_radius if outer is None else outer
    if r >= outer:
        return np.zeros(size)
    span = outer**2 - r**2
    counts = rng.poisson(params.lam * math.pi * span, size)
    total = int(counts.sum())
    radii = np.sqrt(r**2 + span * rng.random(total))
    marks = sample_link_power(params, rng, total)
    owner = np.repeat(np.arange(size), counts)
    return np.bincount(owner, weights=marks * radii ** (-params.alpha), minlength=size)


def sample_truncated_shot_noise(params: SimParams, r: float, rng: np.random.Generator, outer: float | None = None) -> float:
    return float(sample_truncated_shot_noise_batch(params, r, rng, 1, outer)[0])


def _shot_noise_exceedances(
    params: SimParams,
    r: float,
    grid: np.ndarray,
    n: int,
    rng: np.random.Generator,
    outer: float | None,
) -> np.ndarray:
    outer_radius = params.window_radius if outer is None else outer
    expected = max(1.0, params.lam * math.pi * max(outer_radius**2 - r**2, 0.0))
    batch = max(1, int(POINTS_PER_BATCH // expected))
    exceed = np.zeros(len(grid), dtype=np.int64)
    done = 0
    while done < n:
        size = min(batch, n - done)
        exceed += exceedance_counts(sample_truncated_shot_noise_batch(params, r, rng, size, outer), grid)
        done += size
    TAIL_SAMPLES.labels("shot_noise").inc(n)
    return exceed


def estimate_shot_noise_tail(
    params: SimParams,
    r: float,
    x_grid: ArrayLike,
    n: int,
    rng: np.random.Generator | None = None,
    outer: float | None = None,
) -> TailCurve:
    grid = _check_grid(x_grid)
    if rng is None:
        rng = rng_for(params.seed, SHOT_NOISE_STREAM)
    exceed = _shot_noise_exceedances(params, r, grid, n, rng, outer)
    return TailCurve.from_exceedances(grid, exceed, n)


def estimate_center_upper_bound(params: SimParams, n: int) -> TailCurve:
    """Pr(I_hat(T*, (2 - sqrt(nu)) rho) > 1/theta): every interferer of a centre mobile lies beyond that radius."""
    radius = (2.0 - math.sqrt(params.nu)) * params.rho
    lattice = cached_lattice(params.eta, params.rings)
    covering = float(np.hypot(lattice.centers[:, 0], lattice.centers[:, 1]).max()) + lattice.circumradius
    curve = estimate_shot_noise_tail(
        params,
        radius,
        [1.0 / params.theta],
        n,
        rng=rng_for(params.seed, SHOT_NOISE_STREAM, 1),
        outer=covering,
    )
    logger.info("centre upper bound at r=%.4g: %.4g", radius, curve.p_hat[0])
    return curve

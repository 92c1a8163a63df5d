"""Cross-checks between the simulator and closed-form laws.

Interference samples are collected once per configuration so that outage
counts for several thresholds come from the same realizations. The distance
samplers feed the goodness-of-fit checks in ``geometry_check``.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from numpy.typing import ArrayLike
from scipy import stats

from common.errors import EstimationError, ParameterError
from geometry.lattice import cached_lattice, hex_depth, sample_uniform_hexagon
from geometry.point_process import StudyRegion, nearest_bs, sample_ppp
from montecarlo.trials import run_trial
from netmodel.params import Mode, SimParams
from theory.laws import boundary_distance_ccdf, nearest_distance_ccdf

logger = logging.getLogger(__name__)

KS_LIMIT = 0.01
GUARD_RINGS = 1


@dataclass(frozen=True)
class InterferenceSamples:
    interference: np.ndarray
    n_trials: int

    @property
    def n_accepted(self) -> int:
        return len(self.interference)


@dataclass(frozen=True)
class GeometryCheck:
    law: str
    nu: float
    n: int
    ks_statistic: float
    p_value: float

    @property
    def passed(self) -> bool:
        return self.ks_statistic < KS_LIMIT


def collect_interference(params: SimParams, mode: Mode, n_trials: int, sweep_index: int = 0) -> InterferenceSamples:
    if n_trials < 1:
        raise EstimationError(f"n_trials must be at least 1, got {n_trials}")
    values = []
    for i in range(n_trials):
        outcome = run_trial(params, mode, i, sweep_index)
        if outcome.accepted:
            values.append(outcome.interference)
    return InterferenceSamples(interference=np.asarray(values, dtype=float), n_trials=n_trials)


def outage_counts(samples: InterferenceSamples, thetas: Sequence[float]) -> np.ndarray:
    """Number of accepted trials in outage for each threshold, same realizations throughout."""
    levels = np.asarray(thetas, dtype=float)
    return np.array([int(np.count_nonzero(samples.interference * theta > 1.0)) for theta in levels], dtype=np.int64)


def nearest_distance_samples(params: SimParams, n: int, rng: np.random.Generator) -> np.ndarray:
    """Distance from a mobile uniform in the central cluster to its nearest BS, one realization per sample."""
    # the guard ring only truncates nearest distances beyond 2 rho
    lattice = cached_lattice(params.eta, GUARD_RINGS)
    region = StudyRegion.full(lattice)
    out = np.empty(n)
    filled = 0
    while filled < n:
        stations = sample_ppp(params.lam, region, rng)
        if len(stations) == 0:
            continue
        mobile = sample_uniform_hexagon((0.0, 0.0), lattice.rho, lattice, rng)
        _, out[filled] = nearest_bs(mobile, stations)
        filled += 1
    return out


def boundary_distance_samples(params: SimParams, nu: float, n: int, rng: np.random.Generator) -> np.ndarray:
    """Margin sqrt(nu) rho minus hex depth for points uniform in the interior hexagon."""
    if not 0.0 < nu <= 1.0:
        raise ParameterError(f"nu must lie in (0, 1], got {nu}")
    lattice = cached_lattice(params.eta, 0)
    apothem = math.sqrt(nu) * lattice.rho
    points = sample_uniform_hexagon((0.0, 0.0), apothem, lattice, rng, n)
    return apothem - hex_depth(points, (0.0, 0.0), lattice)


def ks_check(law: str, nu: float, samples: ArrayLike, cdf: Callable[[np.ndarray], np.ndarray]) -> GeometryCheck:
    values = np.asarray(samples, dtype=float)
    result = stats.kstest(values, cdf)
    check = GeometryCheck(
        law=law,
        nu=nu,
        n=len(values),
        ks_statistic=float(result.statistic),
        p_value=float(result.pvalue),
    )
    if not check.passed:
        logger.warning("%s law (nu=%.3g): KS statistic %.4f above %.2f", law, nu, check.ks_statistic, KS_LIMIT)
    return check


def geometry_check(params: SimParams, n: int, rng: np.random.Generator) -> list[GeometryCheck]:
    checks = [
        ks_check(
            "nearest_distance",
            params.nu,
            nearest_distance_samples(params, n, rng),
            lambda t: 1.0 - nearest_distance_ccdf(params.lam, t),
        )
    ]
    checks.append(
        ks_check(
            "boundary_distance",
            params.nu,
            boundary_distance_samples(params, params.nu, n, rng),
            lambda d: 1.0 - boundary_distance_ccdf(params.nu, params.rho, d),
        )
    )
    return checks

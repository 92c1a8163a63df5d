from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Sequence

from common.errors import ParameterError
from montecarlo.estimation import OutageEstimate, estimate_outage
from netmodel.params import Mode, SimParams
from observability.metrics import SWEEP_POINTS

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SweepPoint:
    k: float
    params: SimParams
    estimate: OutageEstimate


@dataclass(frozen=True)
class ConvergencePoint:
    rings: int
    estimate: OutageEstimate


def sweep_k(
    params: SimParams,
    k_values: Sequence[float],
    n_per_point: int,
    mode: Mode,
    workers: int = 1,
    hold: str = "lambda",
) -> list[SweepPoint]:
    points: list[SweepPoint] = []
    for index, k in enumerate(k_values):
        if not k > 0:
            raise ParameterError(f"K must be positive, got {k}")
        point_params = params.with_k(k, hold)
        estimate = estimate_outage(point_params, mode, n_per_point, sweep_index=index, workers=workers)
        SWEEP_POINTS.labels("k").inc()
        if estimate.n_outage == 0:
            logger.warning("K=%.4g: no outage in %d accepted trials, exponent not estimable", k, estimate.n_accepted)
        points.append(SweepPoint(k=float(k), params=point_params, estimate=estimate))
    return points


def convergence_sweep(
    params: SimParams,
    rings_values: Sequence[int],
    n_per_point: int,
    mode: Mode,
    workers: int = 1,
) -> list[ConvergencePoint]:
    points: list[ConvergencePoint] = []
    for index, rings in enumerate(rings_values):
        if rings < 0:
            raise ParameterError(f"rings must be non-negative, got {rings}")
        point_params = params.model_copy(update={"rings": int(rings)})
        estimate = estimate_outage(point_params, mode, n_per_point, sweep_index=index, workers=workers)
        SWEEP_POINTS.labels("rings").inc()
        points.append(ConvergencePoint(rings=int(rings), estimate=estimate))
    return points


def intervals_overlap(a: OutageEstimate, b: OutageEstimate) -> bool:
    """|p_a - p_b| within the sum of the two interval half-widths."""
    half_a = (a.ci_hi - a.ci_lo) / 2.0
    half_b = (b.ci_hi - b.ci_lo) / 2.0
    return abs(a.p_hat - b.p_hat) <= half_a + half_b

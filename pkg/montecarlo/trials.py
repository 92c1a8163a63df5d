from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

from common.errors import DegenerateRealizationError, RealizationRejectedError
from montecarlo.seeding import rng_for
from netmodel.params import Mode, SimParams
from netmodel.topology import Interferers, Topology, build_topology, co_channel_interferers

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class TrialOutcome:
    interference: float
    outage: bool
    link_distance: float
    margin: float
    accepted: bool

    @classmethod
    def rejected(cls) -> TrialOutcome:
        return cls(interference=0.0, outage=False, link_distance=math.nan, margin=math.nan, accepted=False)


def interference_power(topology: Topology, interferers: Interferers) -> float:
    if len(interferers) == 0:
        return 0.0
    offsets = topology.positions[interferers.indices] - topology.target_mobile
    dist = np.hypot(offsets[:, 0], offsets[:, 1])
    terms = topology.tx_power[interferers.indices] * interferers.gains * dist ** (-topology.params.alpha)
    # nulled entries are exact zeros and must not turn into nan
    return float(np.sum(np.where(interferers.gains > 0, terms, 0.0)))


def is_outage(interference: float, theta: float) -> bool:
    return interference * theta > 1.0


def run_trial(params: SimParams, mode: Mode, trial_index: int, sweep_index: int = 0) -> TrialOutcome:
    rng = rng_for(params.seed, sweep_index, trial_index)
    try:
        topology = build_topology(params, mode, rng)
    except (DegenerateRealizationError, RealizationRejectedError) as exc:
        logger.debug("trial %d/%d rejected: %s", sweep_index, trial_index, exc)
        return TrialOutcome.rejected()
    if not topology.accepted:
        logger.debug("trial %d/%d rejected: %s", sweep_index, trial_index, topology.reject_reason)
        return TrialOutcome.rejected()

    interference = interference_power(topology, co_channel_interferers(topology, rng))
    return TrialOutcome(
        interference=interference,
        outage=is_outage(interference, params.theta),
        link_distance=float(topology.link_distance[topology.serving_bs]),
        margin=topology.serving_margin(),
        accepted=True,
    )

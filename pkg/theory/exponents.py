from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from enum import Enum

from common.errors import DomainError
from netmodel.params import SimParams

logger = logging.getLogger(__name__)


class Regime(str, Enum):
    EXPONENTIAL = "EXPONENTIAL"
    NON_EXPONENTIAL = "NON_EXPONENTIAL"


@dataclass(frozen=True)
class TypicalBounds:
    lo: float
    hi: float
    lemma_lo: float
    status: Regime


def _check_k(k: float) -> None:
    if not k > 0:
        raise DomainError(f"K must be positive, got {k}")


def _gain_ratio(params: SimParams) -> float:
    return params.delta1 / (params.delta * params.theta)


def exponent_center(params: SimParams, k: float) -> float:
    _check_k(k)
    scale = _gain_ratio(params) ** (2.0 / params.alpha)
    return math.pi / (2.0 * math.sqrt(3.0)) * scale * (2.0 - math.sqrt(params.nu)) ** 2 * k


def exponent_typical_bounds(params: SimParams, k: float) -> TypicalBounds:
    """Lower and upper exponent constants for the typical interior mobile.

    ``lemma_lo`` uses 1/(1 + 2x)^2, the constant obtained from the boundary
    distance law with rho^2 = 1/(2 sqrt(3) eta); ``lo`` keeps the looser
    1/(1 + 4x)^2. Both are reported unchanged.
    """
    _check_k(k)
    if params.nu >= 1.0:
        logger.warning("nu=1: interior mobiles reach the cluster edge, outage decays as a power law in K")
        return TypicalBounds(lo=0.0, hi=0.0, lemma_lo=0.0, status=Regime.NON_EXPONENTIAL)
    ratio = _gain_ratio(params)
    x = ratio ** (1.0 / params.alpha)
    n = 2.0 * math.pi / math.sqrt(3.0) * ratio ** (2.0 / params.alpha) * (1.0 - math.sqrt(params.nu)) ** 2 * k
    return TypicalBounds(
        lo=n / (1.0 + 4.0 * x) ** 2,
        hi=n,
        lemma_lo=n / (1.0 + 2.0 * x) ** 2,
        status=Regime.EXPONENTIAL,
    )

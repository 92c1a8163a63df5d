from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy import stats

from common.errors import DomainError

MIN_POINTS = 3


@dataclass(frozen=True)
class ExponentFit:
    slope: float
    intercept: float
    r_squared: float
    ratio_to_theory: float | None


def _neg_log_probabilities(points: Sequence[tuple[float, float]]) -> tuple[np.ndarray, np.ndarray]:
    if len(points) < MIN_POINTS:
        raise DomainError(f"need at least {MIN_POINTS} points to fit, got {len(points)}")
    k = np.array([float(p[0]) for p in points])
    p = np.array([float(p[1]) for p in points])
    if np.any(p <= 0.0) or np.any(p >= 1.0):
        raise DomainError("outage probabilities must lie strictly inside (0, 1)")
    return k, -np.log(p)


def _fit(x: np.ndarray, y: np.ndarray, theory_constant: float | None) -> ExponentFit:
    result = stats.linregress(x, y)
    r_squared = min(1.0, max(0.0, float(result.rvalue) ** 2))
    if math.isnan(r_squared):
        r_squared = 0.0
    ratio = float(result.slope) / theory_constant if theory_constant else None
    return ExponentFit(
        slope=float(result.slope),
        intercept=float(result.intercept),
        r_squared=r_squared,
        ratio_to_theory=ratio,
    )


def fit_exponent(points: Sequence[tuple[float, float]], theory_constant: float | None = None) -> ExponentFit:
    """Least squares of -log p on K; ``theory_constant`` is the per-K slope predicted in closed form."""
    k, y = _neg_log_probabilities(points)
    return _fit(k, y, theory_constant)


def fit_power_law(points: Sequence[tuple[float, float]]) -> ExponentFit:
    k, y = _neg_log_probabilities(points)
    if np.any(k <= 0):
        raise DomainError("K must be positive for a log-log fit")
    return _fit(np.log(k), y, None)

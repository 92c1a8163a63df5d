from __future__ import annotations

import math

import numpy as np
from numpy.typing import ArrayLike

from common.errors import ParameterError
from netmodel.params import SidelobeMode, SimParams


def draw_mainlobe_gain(params: SimParams, rng: np.random.Generator, size: int | None = None) -> float | np.ndarray:
    # W ~ U[delta1, delta2]; keeps mass near delta1
    if params.delta1 == params.delta2:
        return params.delta1 if size is None else np.full(size, params.delta1)
    return rng.uniform(params.delta1, params.delta2, size)


def sidelobe_gain(params: SimParams, rng: np.random.Generator, size: int | None = None) -> float | np.ndarray:
    if params.sidelobe_mode is SidelobeMode.CONSTANT:
        return params.delta if size is None else np.full(size, params.delta)
    # 1 - U/2 with U in [0, 1) lands in (1/2, 1]
    return params.delta * (1.0 - 0.5 * rng.random(size))


def sidelobe_gain_min(params: SimParams) -> float:
    if params.sidelobe_mode is SidelobeMode.CONSTANT:
        return params.delta
    return 0.5 * params.delta


def tx_power(distance: float | ArrayLike, alpha: float, gain: float | ArrayLike) -> float | np.ndarray:
    w = np.asarray(gain, dtype=float)
    if np.any(w <= 0):
        raise ParameterError("main-lobe gain must be positive")
    power = np.asarray(distance, dtype=float) ** alpha / w
    if power.ndim == 0:
        return float(power)
    return power


def rayleigh_link_distance(lam: float, rng: np.random.Generator, size: int | None = None) -> float | np.ndarray:
    """Draw L with Pr(L >= t) = exp(-pi * lam * t^2)."""
    u = 1.0 - rng.random(size)
    return np.sqrt(-np.log(u) / (math.pi * lam))


def sample_link_power(params: SimParams, rng: np.random.Generator, size: int) -> np.ndarray:
    """I.i.d. marks P*G with Rayleigh link distances."""
    distance = rayleigh_link_distance(params.lam, rng, size)
    w = draw_mainlobe_gain(params, rng, size)
    g = sidelobe_gain(params, rng, size)
    return tx_power(distance, params.alpha, w) * g

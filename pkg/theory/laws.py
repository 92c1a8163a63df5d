"""Closed-form tail and distance laws of the cooperative downlink model.

The link-power tail is Pr(P G > x) = E[exp(-pi lam (beta x)^(2/alpha))]
with beta = W / G. Its density is available in closed form for both
side-lobe modes, so the expectation is evaluated by quadrature instead of
sampling.
"""
from __future__ import annotations

import math
import warnings
from typing import Callable

import numpy as np
from numpy.typing import ArrayLike
from scipy import integrate

from common.errors import DomainError, NumericalError
from netmodel.antennas import sidelobe_gain_min
from netmodel.params import SidelobeMode, SimParams

QUAD_EPSABS = 1e-10
QUAD_LIMIT = 200


def _gamma(params: SimParams) -> float:
    return 2.0 / params.alpha


def _tail_constant(params: SimParams) -> float:
    return math.pi * params.lam * (params.delta1 / params.delta) ** _gamma(params)


def lemma1_exponent(params: SimParams, x: float) -> float:
    if x < 0:
        raise DomainError(f"x must be non-negative, got {x}")
    return _tail_constant(params) * x ** _gamma(params)


def beta_support(params: SimParams) -> tuple[float, float]:
    return params.delta1 / params.delta, params.delta2 / sidelobe_gain_min(params)


def beta_density(params: SimParams) -> Callable[[float], float] | None:
    """Density of beta = W / G on its support, or None when beta is a point mass."""
    a, b = params.delta1, params.delta2
    if params.sidelobe_mode is SidelobeMode.CONSTANT:
        if a == b:
            return None
        width = (b - a) / params.delta
        return lambda t: 1.0 / width
    c, d = 0.5 * params.delta, params.delta
    if a == b:
        return lambda t: a / (t * t * (d - c))

    def density(t: float) -> float:
        g_lo = max(c, a / t)
        g_hi = min(d, b / t)
        if g_hi <= g_lo:
            return 0.0
        return (g_hi**2 - g_lo**2) / (2.0 * (b - a) * (d - c))

    return density


def lemma1_log_oracle(params: SimParams, x: float) -> float:
    """log Pr(P G > x), exact under the configured W and G laws."""
    if x < 0:
        raise DomainError(f"x must be non-negative, got {x}")
    if x == 0:
        return 0.0
    c = math.pi * params.lam
    gamma = _gamma(params)
    lo, hi = beta_support(params)
    shift = c * (lo * x) ** gamma
    density = beta_density(params)
    if density is None:
        return -shift

    def integrand(t: float) -> float:
        return density(t) * math.exp(-(c * (t * x) ** gamma - shift))

    # the mass sits within a few decay widths of the lower end of the support
    width = 1.0 / (c * gamma * x**gamma * lo ** (gamma - 1.0))
    breaks = [lo + width * k for k in (1.0, 10.0, 100.0) if lo + width * k < hi]
    with warnings.catch_warnings():
        warnings.simplefilter("error", integrate.IntegrationWarning)
        try:
            value, _ = integrate.quad(
                integrand, lo, hi, points=breaks or None, epsabs=QUAD_EPSABS, limit=QUAD_LIMIT
            )
        except integrate.IntegrationWarning as exc:
            raise NumericalError(f"tail quadrature did not converge at x={x}: {exc}") from exc
    if not value > 0:
        raise NumericalError(f"tail quadrature returned {value} at x={x}")
    return math.log(value) - shift


def lemma1_oracle(params: SimParams, x: float) -> float:
    return math.exp(lemma1_log_oracle(params, x))


def corollary1_band(params: SimParams, r: float, x: float) -> tuple[float, float]:
    if not r > 0 or not x > 0:
        raise DomainError(f"r and x must be positive, got r={r}, x={x}")
    lo = _tail_constant(params) * r**2 * x ** _gamma(params)
    return lo, 2.0**params.alpha * lo


def nearest_distance_ccdf(lam: float, tau: float | ArrayLike) -> float | np.ndarray:
    t = np.asarray(tau, dtype=float)
    if np.any(t < 0):
        raise DomainError("distance must be non-negative")
    value = np.exp(-math.pi * lam * t**2)
    return float(value) if value.ndim == 0 else value


def boundary_distance_ccdf(nu: float, rho: float, d: float | ArrayLike) -> float | np.ndarray:
    a = math.sqrt(nu) * rho
    dist = np.asarray(d, dtype=float)
    if np.any(dist < 0) or np.any(dist > a * (1.0 + 1e-12)):
        raise DomainError(f"distance must lie in [0, {a}]")
    value = (1.0 - np.minimum(dist, a) / a) ** 2
    return float(value) if value.ndim == 0 else value


def mean_link_power(params: SimParams) -> float:
    """E[P G] = E[L^alpha] E[1/W] E[G] with Rayleigh L."""
    half = params.alpha / 2.0
    link_moment = math.gamma(half + 1.0) / (math.pi * params.lam) ** half
    if params.delta1 == params.delta2:
        inverse_w = 1.0 / params.delta1
    else:
        inverse_w = math.log(params.delta2 / params.delta1) / (params.delta2 - params.delta1)
    mean_g = params.delta if params.sidelobe_mode is SidelobeMode.CONSTANT else 0.75 * params.delta
    return link_moment * inverse_w * mean_g


def campbell_mean(params: SimParams, r: float, outer: float = math.inf) -> float:
    if not r > 0:
        raise DomainError(f"truncation radius must be positive, got {r}")
    if outer <= r:
        return 0.0
    exponent = 2.0 - params.alpha
    far = 0.0 if math.isinf(outer) else outer**exponent
    return params.lam * mean_link_power(params) * 2.0 * math.pi * (r**exponent - far) / (params.alpha - 2.0)

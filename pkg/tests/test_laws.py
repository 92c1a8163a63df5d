from __future__ import annotations

import math

import numpy as np
import pytest
from scipy import integrate

from common.errors import DomainError
from netmodel.params import SidelobeMode, SimParams
from theory.laws import (
    beta_density,
    beta_support,
    boundary_distance_ccdf,
    campbell_mean,
    corollary1_band,
    lemma1_exponent,
    lemma1_log_oracle,
    lemma1_oracle,
    mean_link_power,
    nearest_distance_ccdf,
)


def test_lemma1_exponent(unit_params):
    assert lemma1_exponent(unit_params, 16.0) == pytest.approx(4.0)
    assert lemma1_exponent(unit_params, 0.0) == 0.0
    doubled = unit_params.model_copy(update={"lam": 2 * unit_params.lam})
    assert lemma1_exponent(doubled, 9.0) == pytest.approx(2 * lemma1_exponent(unit_params, 9.0))


def test_oracle_point_mass(unit_params):
    assert lemma1_oracle(unit_params, 0.0) == 1.0
    for x in (1.0, 16.0, 100.0):
        assert lemma1_oracle(unit_params, x) == pytest.approx(math.exp(-math.sqrt(x)), rel=1e-12)


@pytest.mark.parametrize("mode", [SidelobeMode.CONSTANT, SidelobeMode.UNIFORM])
@pytest.mark.parametrize("delta2", [1.0, 3.0])
def test_beta_density_integrates_to_one(spread_params, mode, delta2):
    params = spread_params.model_copy(update={"sidelobe_mode": mode, "delta2": delta2})
    density = beta_density(params)
    if density is None:
        assert mode is SidelobeMode.CONSTANT and delta2 == params.delta1
        return
    lo, hi = beta_support(params)
    grid = np.linspace(lo, hi, 200_001)
    values = np.array([density(t) for t in grid])
    assert integrate.trapezoid(values, grid) == pytest.approx(1.0, abs=1e-4)


@pytest.mark.parametrize("mode", [SidelobeMode.CONSTANT, SidelobeMode.UNIFORM])
def test_oracle_sandwich(spread_params, mode):
    params = spread_params.model_copy(update={"sidelobe_mode": mode, "delta2": 3.0})
    lo, hi = beta_support(params)
    c = math.pi * params.lam
    for x in np.geomspace(0.01, 100.0, 9):
        p = lemma1_oracle(params, float(x))
        assert math.exp(-c * (hi * x) ** 0.5) <= p <= math.exp(-c * (lo * x) ** 0.5)


def test_oracle_ratio_approaches_one_from_above(spread_params):
    params = spread_params.model_copy(update={"delta2": 3.0})
    ratios = [-lemma1_log_oracle(params, x) / lemma1_exponent(params, x) for x in np.geomspace(10.0, 1e6, 6)]
    assert all(r > 1.0 for r in ratios)
    assert all(a > b for a, b in zip(ratios, ratios[1:]))
    assert ratios[-1] < 1.1


def test_corollary_band(unit_params):
    lo, hi = corollary1_band(unit_params, 2.0, 16.0)
    assert lo == pytest.approx(16.0)
    assert hi == pytest.approx(256.0)
    lo2, hi2 = corollary1_band(unit_params, 4.0, 16.0)
    assert (lo2 / lo, hi2 / hi) == pytest.approx((4.0, 4.0))
    with pytest.raises(DomainError):
        corollary1_band(unit_params, 0.0, 1.0)


def test_nearest_distance_ccdf():
    lam = 1.0 / math.pi
    assert nearest_distance_ccdf(lam, 0.0) == 1.0
    assert nearest_distance_ccdf(lam, 1.0) == pytest.approx(0.3679, abs=1e-4)
    assert nearest_distance_ccdf(lam, 2.0) == pytest.approx(0.01832, abs=1e-5)
    assert nearest_distance_ccdf(lam, np.array([0.0, 1.0])).shape == (2,)


def test_boundary_distance_ccdf():
    nu, rho = 0.25, 2.0
    a = math.sqrt(nu) * rho
    assert boundary_distance_ccdf(nu, rho, 0.0) == 1.0
    assert boundary_distance_ccdf(nu, rho, a) == 0.0
    assert boundary_distance_ccdf(nu, rho, a / 2) == pytest.approx(0.25)
    d = np.linspace(0.0, a, 11)
    assert np.allclose(boundary_distance_ccdf(nu, rho, d), ((a - d) / a) ** 2)
    with pytest.raises(DomainError):
        boundary_distance_ccdf(nu, rho, 1.5 * a)


def test_campbell_mean_closed_form():
    params = SimParams(lam=1.0, eta=0.1, nu=0.5, alpha=4.0, delta1=1.0, delta2=1.0, delta=1.0, theta=1.0)
    # E[L^4] = 2 / pi^2 for pi * lambda = pi
    assert mean_link_power(params) == pytest.approx(2.0 / math.pi**2)
    r = 2.0
    infinite = campbell_mean(params, r)
    assert infinite == pytest.approx(mean_link_power(params) * 2 * math.pi * r**-2 / 2)
    assert campbell_mean(params, r, 4.0) < infinite
    assert campbell_mean(params, r, 1.0) == 0.0

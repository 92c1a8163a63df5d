from __future__ import annotations

import math

import pytest

from netmodel.params import SimParams


@pytest.fixture
def minimal_params() -> SimParams:
    return SimParams(
        **{
            "lambda": 1.0,
            "eta": 0.1,
            "nu": 0.25,
            "alpha": 4.0,
            "delta1": 1.0,
            "delta2": 1.0,
            "delta": 0.1,
            "theta": 1.0,
            "seed": 42,
        }
    )


@pytest.fixture
def unit_params() -> SimParams:
    """beta = W / G is identically 1 and pi * lambda = 1."""
    return SimParams(
        lam=1.0 / math.pi,
        eta=0.05,
        nu=1.0,
        alpha=4.0,
        delta1=1.0,
        delta2=1.0,
        delta=1.0,
        theta=1.0,
        seed=5,
    )


@pytest.fixture
def spread_params() -> SimParams:
    return SimParams(
        lam=1.0,
        eta=0.25,
        nu=0.25,
        alpha=4.0,
        delta1=1.0,
        delta2=2.0,
        delta=0.5,
        theta=2.0,
        rings=1,
        seed=2024,
    )

from __future__ import annotations

import dataclasses
import logging
import math
import time
from datetime import datetime, timezone
from typing import Any, Callable

from cli import __version__
from cli.config import RunConfig
from montecarlo.checks import geometry_check
from montecarlo.estimation import OutageEstimate, estimate_outage
from montecarlo.seeding import GEOMETRY_STREAM, rng_for
from montecarlo.sweep import convergence_sweep, intervals_overlap, sweep_k
from montecarlo.tails import estimate_center_upper_bound, estimate_link_power_tail, estimate_shot_noise_tail
from netmodel.params import Mode, SimParams
from storage.results import ResultTable, emit
from theory.exponents import exponent_center, exponent_typical_bounds
from theory.fitting import ExponentFit, fit_exponent, fit_power_law
from theory.laws import campbell_mean, corollary1_band, lemma1_exponent, lemma1_oracle

logger = logging.getLogger(__name__)

THEORY_COLUMNS = ["K", "psi_center", "psi_typical_lo", "psi_typical_hi", "psi_typical_lemma_lo", "typical_status"]
OUTAGE_COLUMNS = [
    "mode",
    "K",
    "n_trials",
    "n_accepted",
    "n_outage",
    "p_hat",
    "ci_lo",
    "ci_hi",
    "psi_hat",
    "acceptance_rate",
    "psi_theory_center",
    "psi_theory_lo",
    "psi_theory_hi",
    "p_upper_shot_noise",
]
SWEEP_COLUMNS = [
    "K",
    "n",
    "n_outage",
    "p_hat",
    "ci_lo",
    "ci_hi",
    "psi_hat",
    "psi_theory_center",
    "psi_theory_lo",
    "psi_theory_hi",
    "acceptance_rate",
]
LINK_TAIL_COLUMNS = ["x", "n", "ccdf", "ci_lo", "ci_hi", "oracle", "exponent_ratio"]
SHOT_TAIL_COLUMNS = ["x", "n", "ccdf", "ci_lo", "ci_hi", "band_lo", "band_hi", "empirical_exponent"]
GEOMCHECK_COLUMNS = ["law", "nu", "n", "ks_statistic", "p_value", "passed"]
CONVERGENCE_COLUMNS = ["rings", "n_trials", "n_accepted", "n_outage", "p_hat", "ci_lo", "ci_hi", "acceptance_rate"]


def _theory_values(params: SimParams, k: float) -> dict[str, Any]:
    bounds = exponent_typical_bounds(params, k)
    return {
        "psi_theory_center": exponent_center(params, k),
        "psi_theory_lo": bounds.lo,
        "psi_theory_hi": bounds.hi,
    }


def _estimate_values(estimate: OutageEstimate) -> dict[str, Any]:
    return {
        "n_outage": estimate.n_outage,
        "p_hat": estimate.p_hat,
        "ci_lo": estimate.ci_lo,
        "ci_hi": estimate.ci_hi,
        "acceptance_rate": estimate.acceptance_rate,
    }


def _neg_log(p: float) -> float | None:
    return -math.log(p) if 0.0 < p <= 1.0 else None


def run_theory(run: RunConfig) -> ResultTable:
    table = ResultTable(columns=THEORY_COLUMNS)
    for k in run.k_values or [run.params.k]:
        bounds = exponent_typical_bounds(run.params, k)
        table.add(
            K=k,
            psi_center=exponent_center(run.params, k),
            psi_typical_lo=bounds.lo,
            psi_typical_hi=bounds.hi,
            psi_typical_lemma_lo=bounds.lemma_lo,
            typical_status=bounds.status,
        )
    return table


def run_outage(run: RunConfig) -> ResultTable:
    params = run.params
    estimate = estimate_outage(params, run.mode, run.n_trials, workers=run.threads)
    upper = None
    if run.mode is Mode.CENTER:
        upper = estimate_center_upper_bound(params, run.n_trials).p_hat[0]
    table = ResultTable(columns=OUTAGE_COLUMNS)
    table.add(
        mode=run.mode,
        K=params.k,
        n_trials=estimate.n_trials,
        n_accepted=estimate.n_accepted,
        psi_hat=estimate.psi_hat,
        p_upper_shot_noise=upper,
        **_estimate_values(estimate),
        **_theory_values(params, params.k),
    )
    return table


def _fit_sweep(run: RunConfig, points: list[tuple[float, float]]) -> dict[str, Any] | None:
    estimable = [(k, p) for k, p in points if 0.0 < p < 1.0]
    if len(estimable) < 3:
        logger.warning("exponent fit skipped: %d estimable points, need 3", len(estimable))
        return None
    fit: ExponentFit
    if run.params.nu >= 1.0:
        fit = fit_power_law(estimable)
        return {"kind": "power_law", **dataclasses.asdict(fit)}
    if run.mode is Mode.CENTER:
        fit = fit_exponent(estimable, exponent_center(run.params, 1.0))
        return {"kind": "exponential", **dataclasses.asdict(fit)}
    bounds = exponent_typical_bounds(run.params, 1.0)
    fit = fit_exponent(estimable, bounds.hi)
    return {
        "kind": "exponential",
        **dataclasses.asdict(fit),
        "ratio_to_theory_lo": fit.slope / bounds.lo,
        "ratio_to_theory_lemma_lo": fit.slope / bounds.lemma_lo,
    }


def run_sweep(run: RunConfig) -> ResultTable:
    points = sweep_k(run.params, run.k_values or [], run.n_trials, run.mode, run.threads, run.hold)
    table = ResultTable(columns=SWEEP_COLUMNS)
    for point in points:
        table.add(
            K=point.k,
            n=point.estimate.n_accepted,
            psi_hat=point.estimate.psi_hat,
            **_estimate_values(point.estimate),
            **_theory_values(point.params, point.k),
        )
    table.metadata["fit"] = _fit_sweep(run, [(p.k, p.estimate.p_hat) for p in points])
    return table


def run_tail(run: RunConfig) -> ResultTable:
    params = run.params
    grid = run.x_grid or []
    if run.tail_kind == "link":
        curve = estimate_link_power_tail(params, grid, run.n_trials)
        table = ResultTable(columns=LINK_TAIL_COLUMNS)
        for x, p, lo, hi in zip(curve.x, curve.p_hat, curve.ci_lo, curve.ci_hi):
            empirical = _neg_log(p)
            exponent = lemma1_exponent(params, x)
            table.add(
                x=x,
                n=curve.n,
                ccdf=p,
                ci_lo=lo,
                ci_hi=hi,
                oracle=lemma1_oracle(params, x),
                exponent_ratio=empirical / exponent if empirical is not None and exponent > 0 else None,
            )
        return table

    r = float(run.r or 0.0)
    curve = estimate_shot_noise_tail(params, r, grid, run.n_trials)
    table = ResultTable(columns=SHOT_TAIL_COLUMNS)
    for x, p, lo, hi in zip(curve.x, curve.p_hat, curve.ci_lo, curve.ci_hi):
        band_lo, band_hi = corollary1_band(params, r, x) if x > 0 else (None, None)
        table.add(
            x=x,
            n=curve.n,
            ccdf=p,
            ci_lo=lo,
            ci_hi=hi,
            band_lo=band_lo,
            band_hi=band_hi,
            empirical_exponent=_neg_log(p),
        )
    table.metadata["campbell_mean"] = campbell_mean(params, r, params.window_radius)
    return table


def run_geomcheck(run: RunConfig) -> ResultTable:
    rng = rng_for(run.params.seed, GEOMETRY_STREAM)
    table = ResultTable(columns=GEOMCHECK_COLUMNS)
    for check in geometry_check(run.params, run.n_trials, rng):
        table.add(
            law=check.law,
            nu=check.nu,
            n=check.n,
            ks_statistic=check.ks_statistic,
            p_value=check.p_value,
            passed=check.passed,
        )
    return table


def run_convergence(run: RunConfig) -> ResultTable:
    points = convergence_sweep(run.params, run.rings_sweep or [], run.n_trials, run.mode, run.threads)
    table = ResultTable(columns=CONVERGENCE_COLUMNS)
    for point in points:
        table.add(
            rings=point.rings,
            n_trials=point.estimate.n_trials,
            n_accepted=point.estimate.n_accepted,
            **_estimate_values(point.estimate),
        )
    table.metadata["overlaps"] = [
        {"rings": [a.rings, b.rings], "overlap": intervals_overlap(a.estimate, b.estimate)}
        for a, b in zip(points, points[1:])
    ]
    return table


HANDLERS: dict[str, Callable[[RunConfig], ResultTable]] = {
    "theory": run_theory,
    "outage": run_outage,
    "sweep": run_sweep,
    "tail": run_tail,
    "geomcheck": run_geomcheck,
    "convergence": run_convergence,
}


def execute(run: RunConfig) -> ResultTable:
    started = time.monotonic()
    logger.info("running %s with K=%.4g seed=%d", run.command, run.params.k, run.params.seed)
    table = HANDLERS[run.command](run)
    table.metadata.update(
        {
            "command": run.command,
            "config": run.echo(),
            "seed": run.params.seed,
            "version": __version__,
            "wall_time_s": time.monotonic() - started,
            "timestamp": datetime.now(timezone.utc).isoformat(),
        }
    )
    return table


def dispatch(run: RunConfig) -> int:
    table = execute(run)
    emit(table, run.output, run.format)
    return 0

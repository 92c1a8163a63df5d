from __future__ import annotations

import logging
import math
import time
from dataclasses import dataclass
from multiprocessing import Pool
from typing import Callable, Iterable

from scipy import stats

from common.errors import EstimationError
from montecarlo.trials import TrialOutcome, run_trial
from netmodel.params import Mode, SimParams
from observability.metrics import ESTIMATE_DURATION, OUTAGES_OBSERVED, TRIALS_RUN

logger = logging.getLogger(__name__)

TrialRunner = Callable[[SimParams, Mode, int, int], TrialOutcome]

CONFIDENCE = 0.95


def wilson_interval(successes: int, total: int, confidence: float = CONFIDENCE) -> tuple[float, float]:
    if total <= 0:
        raise EstimationError("wilson interval needs at least one trial")
    z = stats.norm.ppf(1.0 - (1.0 - confidence) / 2.0)
    p_hat = successes / total
    denominator = 1.0 + z**2 / total
    center = (p_hat + z**2 / (2.0 * total)) / denominator
    spread = z * math.sqrt(p_hat * (1.0 - p_hat) / total + z**2 / (4.0 * total**2)) / denominator
    return max(0.0, min(p_hat, center - spread)), min(1.0, max(p_hat, center + spread))


@dataclass(frozen=True)
class OutageCounts:
    n_trials: int = 0
    n_accepted: int = 0
    n_outage: int = 0

    def __add__(self, other: OutageCounts) -> OutageCounts:
        return OutageCounts(
            self.n_trials + other.n_trials,
            self.n_accepted + other.n_accepted,
            self.n_outage + other.n_outage,
        )

    def record(self, outcome: TrialOutcome) -> OutageCounts:
        return self + OutageCounts(1, int(outcome.accepted), int(outcome.accepted and outcome.outage))


@dataclass(frozen=True)
class OutageEstimate:
    n_trials: int
    n_accepted: int
    n_outage: int
    p_hat: float
    ci_lo: float
    ci_hi: float
    psi_hat: float | None
    acceptance_rate: float

    @classmethod
    def from_counts(cls, counts: OutageCounts) -> OutageEstimate:
        if counts.n_accepted == 0:
            raise EstimationError(f"no accepted trial out of {counts.n_trials}")
        p_hat = counts.n_outage / counts.n_accepted
        ci_lo, ci_hi = wilson_interval(counts.n_outage, counts.n_accepted)
        return cls(
            n_trials=counts.n_trials,
            n_accepted=counts.n_accepted,
            n_outage=counts.n_outage,
            p_hat=p_hat,
            ci_lo=ci_lo,
            ci_hi=ci_hi,
            psi_hat=-math.log(p_hat) if counts.n_outage > 0 else None,
            acceptance_rate=counts.n_accepted / counts.n_trials,
        )


def count_outcomes(outcomes: Iterable[TrialOutcome]) -> OutageCounts:
    counts = OutageCounts()
    for outcome in outcomes:
        counts = counts.record(outcome)
    return counts


def _count_range(task: tuple[SimParams, Mode, int, int, int, TrialRunner]) -> OutageCounts:
    params, mode, sweep_index, start, stop, runner = task
    return count_outcomes(runner(params, mode, i, sweep_index) for i in range(start, stop))


def trial_chunks(n_trials: int, workers: int) -> list[tuple[int, int]]:
    size = max(1, math.ceil(n_trials / (4 * max(1, workers))))
    return [(start, min(start + size, n_trials)) for start in range(0, n_trials, size)]


def run_counts(
    params: SimParams,
    mode: Mode,
    n_trials: int,
    sweep_index: int = 0,
    workers: int = 1,
    runner: TrialRunner = run_trial,
) -> OutageCounts:
    if n_trials < 1:
        raise EstimationError(f"n_trials must be at least 1, got {n_trials}")
    tasks = [(params, mode, sweep_index, a, b, runner) for a, b in trial_chunks(n_trials, workers)]
    if workers <= 1:
        parts = [_count_range(task) for task in tasks]
    else:
        with Pool(processes=workers) as pool:
            parts = pool.map(_count_range, tasks)
    total = OutageCounts()
    for part in parts:
        total = total + part
    return total


def estimate_outage(
    params: SimParams,
    mode: Mode,
    n_trials: int,
    sweep_index: int = 0,
    workers: int = 1,
    runner: TrialRunner = run_trial,
) -> OutageEstimate:
    start_time = time.monotonic()
    counts = run_counts(params, mode, n_trials, sweep_index, workers, runner)
    TRIALS_RUN.labels(mode.value, "accepted").inc(counts.n_accepted)
    TRIALS_RUN.labels(mode.value, "rejected").inc(counts.n_trials - counts.n_accepted)
    OUTAGES_OBSERVED.labels(mode.value).inc(counts.n_outage)
    ESTIMATE_DURATION.labels(mode.value).observe(time.monotonic() - start_time)
    estimate = OutageEstimate.from_counts(counts)
    logger.info(
        "K=%.4g mode=%s: %d/%d outages, acceptance %.3f",
        params.k,
        mode.value,
        counts.n_outage,
        counts.n_accepted,
        estimate.acceptance_rate,
    )
    return estimate

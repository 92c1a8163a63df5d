from __future__ import annotations

from pathlib import Path

from prometheus_client import REGISTRY, Counter, Histogram, generate_latest, write_to_textfile

TRIALS_RUN = Counter(
    "clustercoop_trials_total",
    "Total number of Monte Carlo trials run",
    ["mode", "status"],
)
OUTAGES_OBSERVED = Counter(
    "clustercoop_outages_total",
    "Total number of accepted trials in outage",
    ["mode"],
)
TAIL_SAMPLES = Counter(
    "clustercoop_tail_samples_total",
    "Total number of tail samples drawn",
    ["kind"],
)
SWEEP_POINTS = Counter(
    "clustercoop_sweep_points_total",
    "Total number of sweep points estimated",
    ["sweep"],
)
ESTIMATE_DURATION = Histogram(
    "clustercoop_estimate_duration_seconds",
    "Time spent estimating one outage probability",
    ["mode"],
)


def render_metrics() -> bytes:
    return generate_latest(REGISTRY)


def export_metrics(path: str | Path) -> None:
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    write_to_textfile(str(target), REGISTRY)

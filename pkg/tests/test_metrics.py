from __future__ import annotations

from prometheus_client import REGISTRY

from montecarlo.estimation import estimate_outage
from netmodel.params import Mode
from observability.metrics import export_metrics, render_metrics


def trials_seen() -> float:
    return sum(
        REGISTRY.get_sample_value("clustercoop_trials_total", {"mode": "center", "status": status}) or 0.0
        for status in ("accepted", "rejected")
    )


def test_estimates_are_counted(spread_params, tmp_path):
    before = trials_seen()
    estimate_outage(spread_params, Mode.CENTER, 50)
    assert trials_seen() - before == 50
    assert b"clustercoop_trials_total" in render_metrics()
    target = tmp_path / "nested" / "metrics.prom"
    export_metrics(target)
    assert "clustercoop_outages_total" in target.read_text(encoding="utf-8")

"""Trace-to-report folding and emission formats."""

import json

import pytest

from ptzflow.metrics import (
    CSV_HEADER,
    EMPTY_REPORT,
    MetricsReport,
    aggregate,
    compute_metrics,
    emit,
    emit_aggregate,
    format_table,
)
from ptzflow.simulator import Trace


def make_trace(captures=((0, 4.0),), n=3) -> Trace:
    """n pedestrians spawned at t = 0,1,2 and exited; some captured."""
    trace = Trace("flexible", 7, "cafe01234567")
    for pid in range(n):
        trace.add(float(pid), "spawn", ped=pid, x=1.0, y=160.0)
    for pid, wait in captures:
        trace.add(float(pid) + wait, "capture", cam=0, group=0,
                  peds=str(pid), waits=f"{wait:.4f}")
    for pid in range(n):
        trace.add(40.0 + pid, "exit", ped=pid)
    return trace


def test_compute_metrics_counts():
    rep = compute_metrics(make_trace(captures=((0, 4.0), (2, 6.0))))
    assert rep.total == 3 and rep.captured == 2
    assert rep.watched_ratio == pytest.approx(2 / 3)
    assert rep.missed_ratio == pytest.approx(1 / 3)
    assert rep.avg_wait_s == pytest.approx(5.0)
    assert rep.sim_duration_s == pytest.approx(42.0)
    assert rep.method == "flexible" and rep.seed == 7
    assert not rep.empty


def test_compute_metrics_no_captures():
    rep = compute_metrics(make_trace(captures=()))
    assert rep.captured == 0
    assert rep.avg_wait_s == 0.0
    assert rep.missed_ratio == 1.0


def test_compute_metrics_empty_trace():
    trace = Trace("flexible", 1, "x")
    assert compute_metrics(trace) == EMPTY_REPORT
    assert EMPTY_REPORT.empty


def test_compute_metrics_rejects_double_capture():
    trace = make_trace(captures=((0, 4.0), (0, 6.0)))
    with pytest.raises(ValueError, match="twice"):
        compute_metrics(trace)


def test_compute_metrics_rejects_stray_capture():
    trace = make_trace()
    trace.add(5.0, "capture", cam=0, group=0, peds="99", waits="1.0000")
    with pytest.raises(ValueError, match="unknown"):
        compute_metrics(trace)


def test_compute_metrics_rejects_incomplete_run():
    trace = Trace("flexible", 1, "x")
    trace.add(0.0, "spawn", ped=0, x=0.0, y=0.0)
    with pytest.raises(ValueError, match="incomplete"):
        compute_metrics(trace)


def test_emit_json():
    rep = compute_metrics(make_trace())
    payload = json.loads(emit(rep, "json"))
    assert payload["method"] == "flexible"
    assert payload["total"] == 3
    assert payload["watched_ratio"] == pytest.approx(1 / 3, abs=1e-6)
    assert payload["config"] == "cafe01234567"


def test_emit_csv():
    text = emit(compute_metrics(make_trace()), "csv")
    lines = text.strip().split("\n")
    assert lines[0] == CSV_HEADER
    fields = lines[1].split(",")
    assert fields[0] == "flexible" and fields[-1] == "7"
    with pytest.raises(ValueError):
        emit(EMPTY_REPORT, "yaml")


def test_emit_deterministic():
    a = emit(compute_metrics(make_trace()), "json")
    b = emit(compute_metrics(make_trace()), "json")
    assert a == b


def make_report(method, seed, watched, wait):
    return MetricsReport(
        method=method, seed=seed, config_hash="h", total=100,
        captured=int(100 * watched), watched_ratio=watched,
        avg_wait_s=wait, missed_ratio=1 - watched, sim_duration_s=500.0,
    )


def test_aggregate_means_and_std():
    reports = [
        make_report("flexible", 2, 0.94, 24.0),
        make_report("flexible", 1, 0.90, 20.0),
        make_report("master_slave", 1, 0.70, 40.0),
    ]
    agg = aggregate(reports)
    flex = agg["methods"]["flexible"]
    assert flex["watched_ratio_mean"] == pytest.approx(0.92)
    assert flex["avg_wait_s_mean"] == pytest.approx(22.0)
    assert flex["watched_ratio_std"] > 0
    assert flex["seeds"] == [1, 2]  # sorted regardless of input order
    ms = agg["methods"]["master_slave"]
    assert ms["watched_ratio_std"] == 0.0  # single seed
    assert len(agg["per_seed"]) == 3
    with pytest.raises(ValueError):
        aggregate([])


def test_emit_aggregate_and_table():
    reports = [
        make_report("flexible", 1, 0.90, 20.0),
        make_report("master_slave", 1, 0.70, 40.0),
    ]
    agg = aggregate(reports)
    parsed = json.loads(emit_aggregate(agg, "json"))
    assert "methods" in parsed
    table = format_table(agg)
    assert "flexible" in table and "master_slave" in table
    csv_text = emit_aggregate(agg, "csv")
    assert csv_text.count("\n") >= 2

"""Run metrics, computed purely from a trace.

watched_ratio = captured / spawned, missed_ratio its complement, and
avg_wait_s the mean time from a pedestrian's appearance in the field to
the completion of the capture that identified them. The report's runtime
field is the simulated duration, so emitted files are identical across
reruns of a seed.
"""

import json
import math
from dataclasses import dataclass

CSV_HEADER = "method,watched_ratio,avg_wait_s,missed_ratio,seed"


@dataclass(frozen=True)
class MetricsReport:
    method: str
    seed: int
    config_hash: str
    total: int
    captured: int
    watched_ratio: float
    avg_wait_s: float
    missed_ratio: float
    sim_duration_s: float

    @property
    def empty(self) -> bool:
        return self.total == 0


EMPTY_REPORT = MetricsReport(
    method="none", seed=0, config_hash="", total=0, captured=0,
    watched_ratio=0.0, avg_wait_s=0.0, missed_ratio=0.0, sim_duration_s=0.0,
)


def compute_metrics(trace) -> MetricsReport:
    """Fold a complete trace into a report; empty runs give the sentinel."""
    spawned: set[int] = set()
    exited: set[int] = set()
    waits: dict[int, float] = {}
    duration = 0.0
    for ev in trace.events:
        duration = max(duration, ev.t)
        if ev.kind == "spawn":
            spawned.add(int(ev.get("ped")))
        elif ev.kind == "exit":
            exited.add(int(ev.get("ped")))
        elif ev.kind == "capture":
            peds = [int(p) for p in ev.get("peds").split(",")]
            for pid, w in zip(peds, (float(w) for w in ev.get("waits").split(","))):
                if pid in waits:
                    raise ValueError(f"pedestrian {pid} captured twice")
                waits[pid] = w
    if not spawned:
        return EMPTY_REPORT
    if exited != spawned:
        raise ValueError(
            f"incomplete trace: {len(spawned)} spawns but {len(exited)} exits"
        )
    stray = set(waits) - spawned
    if stray:
        raise ValueError(f"captures for unknown pedestrians {sorted(stray)[:5]}")
    total = len(spawned)
    captured = len(waits)
    return MetricsReport(
        method=trace.method,
        seed=trace.seed,
        config_hash=trace.config_hash,
        total=total,
        captured=captured,
        watched_ratio=captured / total,
        avg_wait_s=sum(waits.values()) / captured if captured else 0.0,
        missed_ratio=(total - captured) / total,
        sim_duration_s=duration,
    )


def emit(report: MetricsReport, fmt: str = "json") -> str:
    if fmt == "json":
        payload = {
            "method": report.method,
            "seed": report.seed,
            "config": report.config_hash,
            "total": report.total,
            "captured": report.captured,
            "watched_ratio": round(report.watched_ratio, 6),
            "avg_wait_s": round(report.avg_wait_s, 6),
            "missed_ratio": round(report.missed_ratio, 6),
            "sim_duration_s": round(report.sim_duration_s, 4),
        }
        return json.dumps(payload, indent=2) + "\n"
    if fmt == "csv":
        return CSV_HEADER + "\n" + _csv_row(report) + "\n"
    raise ValueError(f"unknown format {fmt!r}")


def _csv_row(report: MetricsReport) -> str:
    return (
        f"{report.method},{report.watched_ratio:.6f},"
        f"{report.avg_wait_s:.6f},{report.missed_ratio:.6f},{report.seed}"
    )


def _mean_std(values: list[float]) -> tuple[float, float]:
    n = len(values)
    mean = sum(values) / n
    if n < 2:
        return mean, 0.0
    var = sum((v - mean) ** 2 for v in values) / (n - 1)
    return mean, math.sqrt(var)


def aggregate(reports: list[MetricsReport]) -> dict:
    """Per-method mean and sample std across seeds, plus per-seed rows."""
    if not reports:
        raise ValueError("nothing to aggregate")
    methods: dict[str, list[MetricsReport]] = {}
    for r in reports:
        methods.setdefault(r.method, []).append(r)
    out = {"methods": {}, "per_seed": []}
    for method in sorted(methods):
        rs = sorted(methods[method], key=lambda r: r.seed)
        watched = [r.watched_ratio for r in rs]
        wait = [r.avg_wait_s for r in rs]
        missed = [r.missed_ratio for r in rs]
        wm, ws = _mean_std(watched)
        am, as_ = _mean_std(wait)
        mm, ms = _mean_std(missed)
        out["methods"][method] = {
            "seeds": [r.seed for r in rs],
            "watched_ratio_mean": round(wm, 6),
            "watched_ratio_std": round(ws, 6),
            "avg_wait_s_mean": round(am, 6),
            "avg_wait_s_std": round(as_, 6),
            "missed_ratio_mean": round(mm, 6),
            "missed_ratio_std": round(ms, 6),
        }
        out["per_seed"].extend(
            {
                "method": r.method,
                "seed": r.seed,
                "watched_ratio": round(r.watched_ratio, 6),
                "avg_wait_s": round(r.avg_wait_s, 6),
                "missed_ratio": round(r.missed_ratio, 6),
            }
            for r in rs
        )
    return out


def emit_aggregate(agg: dict, fmt: str = "json") -> str:
    if fmt == "json":
        return json.dumps(agg, indent=2) + "\n"
    if fmt == "csv":
        lines = [CSV_HEADER]
        for row in agg["per_seed"]:
            lines.append(
                f"{row['method']},{row['watched_ratio']:.6f},"
                f"{row['avg_wait_s']:.6f},{row['missed_ratio']:.6f},{row['seed']}"
            )
        for method, m in agg["methods"].items():
            lines.append(
                f"{method},{m['watched_ratio_mean']:.6f},"
                f"{m['avg_wait_s_mean']:.6f},{m['missed_ratio_mean']:.6f},mean"
            )
            lines.append(
                f"{method},{m['watched_ratio_std']:.6f},"
                f"{m['avg_wait_s_std']:.6f},{m['missed_ratio_std']:.6f},std"
            )
        return "\n".join(lines) + "\n"
    raise ValueError(f"unknown format {fmt!r}")


def format_table(agg: dict) -> str:
    """Console comparison table, one row per method."""
    rows = [("Method", "Watched Ratio", "Avg Wait (s)", "Missed Ratio")]
    for method, m in agg["methods"].items():
        rows.append(
            (
                method,
                f"{m['watched_ratio_mean']:.4f}",
                f"{m['avg_wait_s_mean']:.2f}",
                f"{m['missed_ratio_mean']:.4f}",
            )
        )
    widths = [max(len(r[c]) for r in rows) for c in range(4)]
    lines = []
    for i, row in enumerate(rows):
        lines.append("  ".join(cell.ljust(widths[c]) for c, cell in enumerate(row)))
        if i == 0:
            lines.append("  ".join("-" * w for w in widths))
    return "\n".join(lines)

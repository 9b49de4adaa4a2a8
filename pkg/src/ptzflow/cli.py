"""Command-line interface.

Subcommands:
  run       simulate one scenario config and write trace + metrics
  compare   run all three planners across seeds and tabulate
  validate  cross-check the flow solver against the exhaustive oracle
  plan      solve a single planning instant from a snapshot file

Exit codes: 0 success, 1 validation failure, 2 usage/config errors or
an infeasible model. PTZFLOW_LOG sets the log level (DEBUG, INFO, ...).
"""

import argparse
import configparser
import logging
import math
import os
import sys
import time
from dataclasses import replace

import numpy as np

from . import metrics as metrics_mod
from . import planner as planner_mod
from . import simulator, tracking
from .flow_model import build_graph, dump_solution
from .geometry import CameraConfig, Rect
from .solver import (
    ActionKind,
    InfeasibleError,
    brute_force_oracle,
    default_backend,
    extract_schedule,
    random_instance,
    solve,
    validate_solution,
)

logger = logging.getLogger(__name__)


def _add_common(p):
    p.add_argument("--config", required=True, help="scenario INI file")
    p.add_argument("--seed", type=int, default=None, help="override the config seed")
    p.add_argument("--out", default=".", help="output directory")
    p.add_argument("--format", choices=("json", "csv"), default="json")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ptzflow", description=__doc__)
    sub = parser.add_subparsers(dest="cmd", required=True)

    p_run = sub.add_parser("run", help="simulate one scenario")
    _add_common(p_run)
    p_run.add_argument(
        "--planner", choices=simulator.PLANNERS, default=None,
        help="override the config planner",
    )

    p_cmp = sub.add_parser("compare", help="all planners, several seeds")
    _add_common(p_cmp)
    p_cmp.add_argument(
        "--seeds", type=int, default=5, help="number of consecutive seeds"
    )

    p_val = sub.add_parser("validate", help="solver vs oracle cross-check")
    p_val.add_argument("--trials", type=int, default=200)
    p_val.add_argument("--seed", type=int, default=0)
    p_val.add_argument("--max-cameras", type=int, default=2)
    p_val.add_argument("--max-regions", type=int, default=3)
    p_val.add_argument("--max-groups", type=int, default=5)
    p_val.add_argument("--max-horizon", type=int, default=6)

    p_plan = sub.add_parser("plan", help="plan one instant from a snapshot")
    p_plan.add_argument("--config", required=True, help="snapshot INI file")
    p_plan.add_argument("--dump", default=None, help="write the solved graph here")
    return parser


def cmd_run(args) -> int:
    cfg = simulator.load_config(args.config)
    if args.seed is not None:
        cfg = replace(cfg, seed=args.seed)
    if args.planner is not None:
        cfg = replace(cfg, planner=args.planner)
    started = time.monotonic()
    trace = simulator.run_scenario(cfg)
    wall = time.monotonic() - started
    report = metrics_mod.compute_metrics(trace)
    os.makedirs(args.out, exist_ok=True)
    stem = f"{trace.method}_s{cfg.seed}"
    trace_path = os.path.join(args.out, f"trace_{stem}.trace")
    metrics_path = os.path.join(args.out, f"metrics_{stem}.{args.format}")
    trace.write(trace_path)
    with open(metrics_path, "w") as fh:
        fh.write(metrics_mod.emit(report, args.format))
    print(
        f"{trace.method} seed={cfg.seed}: watched={report.watched_ratio:.4f} "
        f"avg_wait={report.avg_wait_s:.2f}s missed={report.missed_ratio:.4f} "
        f"({report.total} pedestrians, {report.sim_duration_s:.0f}s simulated, "
        f"{wall:.1f}s wall)"
    )
    print(f"wrote {trace_path} and {metrics_path}")
    return 0


def cmd_compare(args) -> int:
    cfg = simulator.load_config(args.config)
    base_seed = cfg.seed if args.seed is None else args.seed
    if args.seeds < 1:
        raise simulator.ConfigError("--seeds must be >= 1")
    os.makedirs(args.out, exist_ok=True)
    reports = []
    for seed in range(base_seed, base_seed + args.seeds):
        for method in simulator.PLANNERS:
            run_cfg = replace(cfg, seed=seed, planner=method)
            started = time.monotonic()
            trace = simulator.run_scenario(run_cfg)
            wall = time.monotonic() - started
            report = metrics_mod.compute_metrics(trace)
            reports.append(report)
            trace.write(os.path.join(args.out, f"trace_{method}_s{seed}.trace"))
            logger.info(
                "%s seed=%d watched=%.4f wait=%.2f (%.1fs wall)",
                method, seed, report.watched_ratio, report.avg_wait_s, wall,
            )
    agg = metrics_mod.aggregate(reports)
    out_path = os.path.join(args.out, f"compare.{args.format}")
    with open(out_path, "w") as fh:
        fh.write(metrics_mod.emit_aggregate(agg, args.format))
    print(metrics_mod.format_table(agg))
    print(f"wrote {out_path}")
    return 0


def cmd_validate(args) -> int:
    rng = np.random.default_rng(args.seed)
    mismatches = 0
    infeasible = 0
    started = time.monotonic()
    for trial in range(args.trials):
        pv = random_instance(
            rng,
            max_cameras=args.max_cameras,
            max_regions=args.max_regions,
            max_groups=args.max_groups,
            max_horizon=args.max_horizon,
        )
        graph = build_graph(pv)
        solver_obj = oracle_obj = None
        try:
            sol = solve(graph)
            solver_obj = sol.objective
            bad = validate_solution(graph, sol)
            if bad:
                print(f"trial {trial}: constraint violations: {bad[:3]}")
                mismatches += 1
                continue
        except InfeasibleError:
            pass
        try:
            oracle_obj = brute_force_oracle(graph).objective
        except InfeasibleError:
            pass
        if solver_obj != oracle_obj:
            print(
                f"trial {trial}: solver {solver_obj} vs oracle {oracle_obj} "
                f"(l={pv.n_cameras} m={pv.n_regions} n={len(pv.group_ids)} "
                f"H={pv.horizon} T={pv.window})"
            )
            mismatches += 1
        if solver_obj is None:
            infeasible += 1
    elapsed = time.monotonic() - started
    print(
        f"{args.trials} trials, {infeasible} infeasible, {mismatches} mismatches, "
        f"{elapsed:.2f}s, backend={default_backend()}"
    )
    return 1 if mismatches else 0


def _parse_snapshot(path: str):
    parser = configparser.ConfigParser()
    if not parser.read(path):
        raise simulator.ConfigError(f"cannot read snapshot file {path!r}")
    if not parser.has_section("plan"):
        raise simulator.ConfigError("snapshot needs a [plan] section")
    plan = parser["plan"]
    try:
        now = plan.getfloat("now", 0.0)
        horizon = plan.getint("horizon", 10)
        window = plan.getint("window", 5)
        period_len = plan.getfloat("period_len", 3.0)
        group_radius = plan.getfloat("group_radius", 6.0)
        grouped = plan.getboolean("grouped", True)
        width = plan.getfloat("field_width", 300.0)
        height = plan.getfloat("field_height", 160.0)
    except ValueError as exc:
        raise simulator.ConfigError(f"bad [plan] value: {exc}") from exc
    cameras = []
    tracks = []
    for section in parser.sections():
        if section == "plan":
            continue
        kind, _, ident = section.partition(" ")
        if kind == "camera":
            sec = parser[section]
            cameras.append(
                CameraConfig(
                    id=int(ident),
                    x=sec.getfloat("x"),
                    y=sec.getfloat("y"),
                    height=sec.getfloat("height", 50.0),
                    fov=math.radians(sec.getfloat("fov_deg", 90.0)),
                    max_zoom=sec.getfloat("max_zoom", 10.0),
                )
            )
        elif kind == "track":
            sec = parser[section]
            state = tracking.TrackState(
                sec.getfloat("x"), sec.getfloat("y"),
                sec.getfloat("vx", 0.0), sec.getfloat("vy", 0.0),
            )
            tracks.append(
                tracking.Track(
                    id=int(ident),
                    state=state,
                    covariance=np.eye(4) * tracking.BIRTH_VARIANCE,
                    birth_time=now,
                    interrogated=sec.getboolean("interrogated", False),
                )
            )
        else:
            raise simulator.ConfigError(f"unknown section [{section}]")
    if not cameras:
        cameras = simulator.default_cameras()
    cameras.sort(key=lambda c: c.id)
    bounds = Rect(0.0, 0.0, width, height)
    setup = planner_mod.PlannerSetup(
        cameras=cameras,
        regions=planner_mod.make_regions(bounds, len(cameras)),
        bounds=bounds,
        horizon=horizon,
        window=window,
        period_len=period_len,
        group_radius=group_radius,
        grouped=grouped,
    )
    return setup, sorted(tracks, key=lambda tr: tr.id), now


def cmd_plan(args) -> int:
    setup, tracks, now = _parse_snapshot(args.config)
    result = planner_mod.build_plan(setup, tracks, now)
    print(
        f"plan at t={now:g}: {len(tracks)} tracks, {len(result.groups)} groups "
        f"({result.context.n_departing} departing), nodes={len(result.graph.nodes)} "
        f"arcs={len(result.graph.arcs)} objective={result.solution.objective}"
    )
    for g in result.groups:
        members = ",".join(str(m) for m in g.member_ids)
        exit_s = "inf" if math.isinf(g.exit_time) else f"{g.exit_time:.1f}s"
        print(f"  group {g.id}: tracks [{members}] exit {exit_s}")
    for cam_idx, row in enumerate(result.schedule.actions):
        cells = [
            f"G{a.target}" if a.kind is ActionKind.GROUP else f"F{a.target}"
            for a in row
        ]
        print(f"  camera {cam_idx}: " + " ".join(cells))
    if args.dump:
        with open(args.dump, "w") as fh:
            fh.write(dump_solution(result.graph, result.solution.flows))
        print(f"wrote {args.dump}")
    return 0


def main(argv=None) -> int:
    level = os.environ.get("PTZFLOW_LOG", "WARNING").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING))
    parser = build_parser()
    args = parser.parse_args(argv)
    handler = {
        "run": cmd_run,
        "compare": cmd_compare,
        "validate": cmd_validate,
        "plan": cmd_plan,
    }[args.cmd]
    try:
        return handler(args)
    except (simulator.ConfigError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except InfeasibleError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

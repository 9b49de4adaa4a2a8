"""Receding-horizon plan construction.

Glues the pipeline together for one planning instant: predict tracks
across the horizon, form groups, classify and value them, build the
time-expanded graph, solve it, and read back a schedule. Only the first
period of the schedule is executed; the caller replans at the next
period boundary.
"""

import logging
import math
from dataclasses import dataclass

from . import grouping, tracking, valuation
from .flow_model import DemandSpec, FlowGraph, PlanValues, build_graph
from .geometry import NORTH, CameraConfig, Rect, sight_angle
from .solver import FlowSolution, Schedule, extract_schedule, solve

logger = logging.getLogger(__name__)

EDGE_MARGIN = 2.0  # ft; predictions this far outside the field retire a track


@dataclass(frozen=True)
class Region:
    index: int
    rect: Rect


def make_regions(bounds: Rect, count: int) -> list[Region]:
    """Equal-width vertical bands spanning the field."""
    if count < 1:
        raise ValueError("need at least one region")
    width = (bounds.xmax - bounds.xmin) / count
    return [
        Region(
            k,
            Rect(
                bounds.xmin + k * width,
                bounds.ymin,
                bounds.xmin + (k + 1) * width,
                bounds.ymax,
            ),
        )
        for k in range(count)
    ]


@dataclass
class PlannerSetup:
    cameras: list[CameraConfig]
    regions: list[Region]
    bounds: Rect
    horizon: int
    window: int
    period_len: float
    group_radius: float
    grouped: bool  # set-cover groups vs one singleton group per track


@dataclass
class PlanResult:
    schedule: Schedule
    graph: FlowGraph
    solution: FlowSolution
    groups: list[grouping.GroupNode]
    context: valuation.ValueContext


def _build_groups(
    setup: PlannerSetup, candidates: list[tracking.Track], now: float
) -> list[grouping.GroupNode]:
    first_period = {
        tr.id: tracking.predict_positions(tr, 1, setup.period_len)[0] for tr in candidates
    }
    if setup.grouped:
        covers = grouping.candidate_coverages(first_period, setup.group_radius)
        groups = grouping.greedy_set_cover(covers)
    else:
        groups = [
            grouping.GroupNode(
                id=idx, member_ids=(tr.id,), anchor_id=tr.id, focus=first_period[tr.id]
            )
            for idx, tr in enumerate(sorted(candidates, key=lambda tr: tr.id))
        ]
    by_id = {tr.id: tr for tr in candidates}
    exits = {
        tr.id: tracking.predict_exit_time(tr, setup.bounds, now) for tr in candidates
    }
    for g in groups:
        g.exit_time = grouping.group_exit_time(g, exits)
        anchor = by_id[g.anchor_id]
        g.focus_per_period = tuple(
            tracking.predict_positions(anchor, setup.horizon, setup.period_len)
        )
        vx = sum(by_id[tid].state.vx for tid in g.member_ids) / g.size
        vy = sum(by_id[tid].state.vy for tid in g.member_ids) / g.size
        speed = math.hypot(vx, vy)
        g.facing = (vx / speed, vy / speed) if speed > 1e-9 else None
    return groups


def aligned_demands(
    horizon: int,
    window: int,
    n_regions: int,
    global_period: int = 1,
    satisfied: frozenset[int] = frozenset(),
) -> tuple[DemandSpec, ...]:
    """Fixed-look windows aligned to the global period clock.

    Window w spans global periods ((w-1)*window, w*window]. A plan
    starting mid-window owes a look only to regions not in `satisfied`
    (those not yet looked at this window); a window cut short by the
    horizon is optional because the next plan sees the rest of it.
    """
    if window < 1 or global_period < 1:
        raise ValueError("window and global_period must be positive")
    g_end = global_period + horizon - 1
    specs = []
    w = (global_period - 1) // window
    while w * window + 1 <= g_end:
        w_start = w * window + 1
        w_end = (w + 1) * window
        lo = max(w_start, global_period) - global_period + 1
        hi = min(w_end, g_end) - global_period + 1
        periods = tuple(range(lo, hi + 1))
        whole = w_end <= g_end
        current = w_start < global_period
        for k in range(n_regions):
            req = whole and not (current and k in satisfied)
            specs.append(DemandSpec(k, periods, required=req))
        w += 1
    return tuple(specs)


def build_plan(
    setup: PlannerSetup,
    tracks: list[tracking.Track],
    now: float,
    global_period: int = 1,
    satisfied: frozenset[int] = frozenset(),
) -> PlanResult:
    """Plan the next `horizon` periods for the current track picture.

    `tracks` is the full live track list; interrogated tracks only count
    toward fixed-look values, the rest become capture candidates.
    `global_period` is the absolute index of the plan's first period
    since the run began; it anchors the fixed-look windows to the wall
    clock, with `satisfied` naming regions already looked at in the
    window in progress.
    """
    candidates = [tr for tr in tracks if not tr.interrogated]
    groups = _build_groups(setup, candidates, now)
    ctx = valuation.classify_and_rank(groups, setup.horizon, setup.period_len, now)

    group_arcs: dict[tuple[int, int, int], int] = {}
    for gi, g in enumerate(groups):
        cls = ctx.classes[g.id]
        # a capture ending after the group's predicted exit films nobody, and
        # the exit estimate is noisy, so keep half a period of slack before it
        last_period = setup.horizon
        if math.isfinite(g.exit_time):
            cutoff = g.exit_time - 0.5 * setup.period_len - now
            last_period = min(
                setup.horizon, int(math.ceil(cutoff / setup.period_len)) - 1
            )
        ref = (-g.facing[0], -g.facing[1]) if g.facing else None
        # departing groups are scheduled in the next two periods or not at
        # all: a later slot is a promise the next replan will not keep, and
        # their values outbid everything else for the near-term slots
        if cls.departing:
            last_period = min(last_period, 2)
        for t in range(1, last_period + 1):
            focus = g.focus_per_period[t - 1]
            for cam in setup.cameras:
                off_camera = math.hypot(focus[0] - cam.x, focus[1] - cam.y) > 1e-9
                e = sight_angle(cam, focus, ref) if ref and off_camera else math.pi / 2
                if cls.departing:
                    v = valuation.departing_value(ctx, cls.rank, e, g.size)
                else:
                    v = valuation.staying_value(ctx, t, cls.rank, e, g.size)
                group_arcs[(cam.id, gi, t)] = v

    # region occupancy counts every live track, interrogated included
    preds = {
        tr.id: tracking.predict_positions(tr, setup.horizon, setup.period_len)
        for tr in tracks
    }
    fixed_arcs: dict[tuple[int, int, int], int] = {}
    for t in range(1, setup.horizon + 1):
        counts = [0] * len(setup.regions)
        for tr in tracks:
            x, y = preds[tr.id][t - 1]
            for region in setup.regions:
                if region.rect.contains(x, y):
                    counts[region.index] += 1
                    break
        for region in setup.regions:
            for cam in setup.cameras:
                e = sight_angle(cam, region.rect.center, NORTH)
                fixed_arcs[(cam.id, region.index, t)] = valuation.fixed_value(
                    counts[region.index], e
                )

    pv = PlanValues(
        n_cameras=len(setup.cameras),
        n_regions=len(setup.regions),
        group_ids=[g.id for g in groups],
        horizon=setup.horizon,
        window=setup.window,
        group_arcs=group_arcs,
        fixed_arcs=fixed_arcs,
        demands=aligned_demands(
            setup.horizon, setup.window, len(setup.regions), global_period, satisfied
        ),
    )
    graph = build_graph(pv)
    solution = solve(graph)
    schedule = extract_schedule(graph, solution)
    logger.debug(
        "plan at t=%.2f: %d tracks, %d groups (%d departing), objective %d",
        now,
        len(tracks),
        len(groups),
        ctx.n_departing,
        solution.objective,
    )
    return PlanResult(schedule, graph, solution, groups, ctx)

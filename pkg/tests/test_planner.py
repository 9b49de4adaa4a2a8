"""Plan assembly: regions, wall-clock windows, group arcs, one solve."""

import numpy as np
import pytest

from ptzflow import tracking
from ptzflow.flow_model import ArcKind, NodeKind, uniform_demands
from ptzflow.geometry import CameraConfig, Rect
from ptzflow.planner import (
    PlannerSetup,
    aligned_demands,
    build_plan,
    make_regions,
)
from ptzflow.solver import ActionKind
from ptzflow.valuation import GroupClass

BOUNDS = Rect(0.0, 0.0, 300.0, 160.0)


def make_setup(grouped=True):
    cameras = [
        CameraConfig(id=i, x=50.0 + 100.0 * i, y=0.0, height=50.0) for i in range(3)
    ]
    return PlannerSetup(
        cameras=cameras,
        regions=make_regions(BOUNDS, 3),
        bounds=BOUNDS,
        horizon=10,
        window=5,
        period_len=3.0,
        group_radius=6.0,
        grouped=grouped,
    )


def make_track(tid, x, y, vx, vy, interrogated=False):
    return tracking.Track(
        id=tid,
        state=tracking.TrackState(x, y, vx, vy),
        covariance=np.eye(4) * 0.1,
        birth_time=0.0,
        interrogated=interrogated,
    )


def test_make_regions_bands():
    regions = make_regions(BOUNDS, 3)
    assert [r.index for r in regions] == [0, 1, 2]
    assert regions[0].rect == Rect(0.0, 0.0, 100.0, 160.0)
    assert regions[2].rect == Rect(200.0, 0.0, 300.0, 160.0)
    with pytest.raises(ValueError):
        make_regions(BOUNDS, 0)


def test_aligned_demands_fresh_run_matches_uniform():
    assert aligned_demands(10, 5, 3, global_period=1) == uniform_demands(10, 5, 3)


def test_aligned_demands_midwindow():
    specs = aligned_demands(10, 5, 2, global_period=3, satisfied=frozenset({1}))
    by_region = {0: [], 1: []}
    for s in specs:
        by_region[s.region].append(s)
    for k in (0, 1):
        windows = by_region[k]
        assert [w.periods for w in windows] == [(1, 2, 3), (4, 5, 6, 7, 8), (9, 10)]
        covered = [t for w in windows for t in w.periods]
        assert covered == list(range(1, 11))  # partition, no overlap
        assert windows[2].required is False  # horizon-cut tail
        assert windows[1].required is True
    # the in-progress window only binds regions not yet looked at
    assert by_region[0][0].required is True
    assert by_region[1][0].required is False


def test_aligned_demands_validation():
    with pytest.raises(ValueError):
        aligned_demands(10, 0, 2)
    with pytest.raises(ValueError):
        aligned_demands(10, 5, 2, global_period=0)


def test_aligned_demands_window_not_dividing_horizon():
    # window 4 never divides horizon 10; windows still tile every period
    specs = aligned_demands(10, 4, 1, global_period=1)
    assert [s.periods for s in specs] == [(1, 2, 3, 4), (5, 6, 7, 8), (9, 10)]
    assert [s.required for s in specs] == [True, True, False]


def test_empty_plan_is_all_fixed_looks():
    result = build_plan(make_setup(), [], now=0.0)
    assert result.groups == []
    for row in result.schedule.actions:
        assert all(a.kind is ActionKind.FIXED for a in row)
    assert result.solution.objective >= 0


def test_plan_groups_and_captures_neighbors():
    tracks = [
        make_track(0, 100.0, 100.0, 0.0, -1.0),
        make_track(1, 103.0, 100.0, 0.0, -1.0),  # inside group radius of 0
        make_track(2, 250.0, 100.0, 0.0, -1.0),
    ]
    result = build_plan(make_setup(), tracks, now=0.0)
    members = sorted(tuple(g.member_ids) for g in result.groups)
    assert members == [(0, 1), (2,)]
    captured = {
        a.target for row in result.schedule.actions for a in row
        if a.kind is ActionKind.GROUP
    }
    assert captured == {0, 1}  # both groups worth taking
    # slow southbound walkers stay beyond the horizon
    assert result.context.n_departing == 0


def test_plan_singleton_mode():
    tracks = [
        make_track(0, 100.0, 100.0, 0.0, -1.0),
        make_track(1, 103.0, 100.0, 0.0, -1.0),
    ]
    result = build_plan(make_setup(grouped=False), tracks, now=0.0)
    assert sorted(g.member_ids for g in result.groups) == [(0,), (1,)]


def test_plan_skips_interrogated_tracks():
    tracks = [
        make_track(0, 100.0, 100.0, 0.0, -1.0, interrogated=True),
        make_track(1, 200.0, 100.0, 0.0, -1.0),
    ]
    result = build_plan(make_setup(), tracks, now=0.0)
    assert [g.member_ids for g in result.groups] == [(1,)]


def test_departing_group_confined_to_first_two_periods():
    # exits in ~10 s, well inside the 30 s horizon
    tracks = [make_track(0, 150.0, 20.0, 0.0, -2.0)]
    result = build_plan(make_setup(), tracks, now=0.0)
    assert result.context.classes[0] == GroupClass(departing=True, rank=1)
    capture_ts = [
        result.graph.nodes[a.tail].t
        for a in result.graph.arcs if a.kind is ArcKind.CAPTURE
    ]
    assert capture_ts and max(capture_ts) <= 2


def test_staying_group_spans_full_horizon():
    tracks = [make_track(0, 150.0, 150.0, 0.0, -1.0)]  # 150 s from the edge
    result = build_plan(make_setup(), tracks, now=0.0)
    assert result.context.n_staying == 1
    capture_ts = {
        result.graph.nodes[a.tail].t
        for a in result.graph.arcs if a.kind is ArcKind.CAPTURE
    }
    assert capture_ts == set(range(1, 11))


def test_imminent_exit_gets_no_capture_arcs():
    # leaves in under a second: any capture would finish after the exit
    tracks = [make_track(0, 150.0, 2.0, 0.0, -3.0)]
    result = build_plan(make_setup(), tracks, now=0.0)
    assert all(a.kind is not ArcKind.CAPTURE for a in result.graph.arcs)
    # the plan still schedules every camera every period
    assert result.schedule.horizon == 10


def test_plan_respects_satisfied_regions():
    # replanning mid-window: regions 0 and 2 already looked at, so only
    # region 1 is owed a look in the current window's remainder
    result = build_plan(
        make_setup(), [], now=6.0, global_period=3, satisfied=frozenset({0, 2})
    )
    demands = result.graph.demands
    current = [d for d in demands if d.periods[0] == 1]
    req = {d.region: d.required for d in current}
    assert req == {0: False, 1: True, 2: False}


def test_plan_solution_is_validated_flow():
    tracks = [make_track(i, 40.0 + 30 * i, 80.0, 0.5, -1.2) for i in range(6)]
    result = build_plan(make_setup(), tracks, now=0.0)
    from ptzflow.solver import validate_solution

    assert validate_solution(result.graph, result.solution) == []
    assert result.graph.nodes[-1].kind is NodeKind.SINK

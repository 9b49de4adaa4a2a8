"""Time-expanded graph construction: shape, balances, values, validation."""

import pytest

from conftest import full_plan_values
from ptzflow.flow_model import (
    VALUE_CAP,
    ArcKind,
    DemandSpec,
    NodeKind,
    PlanValues,
    build_graph,
    compute_P,
    dump_graph,
    dump_solution,
    feasibility_check,
    uniform_demands,
)


def test_uniform_demands_tiling():
    specs = uniform_demands(10, 5, 3)
    assert len(specs) == 6
    assert specs[0] == DemandSpec(0, (1, 2, 3, 4, 5))
    assert specs[3] == DemandSpec(0, (6, 7, 8, 9, 10))
    assert all(s.required for s in specs)
    with pytest.raises(ValueError):
        uniform_demands(10, 4, 3)
    with pytest.raises(ValueError):
        uniform_demands(10, 0, 3)


def test_compute_P():
    assert compute_P(10, 5, 3, 3) == 24
    assert compute_P(5, 5, 3, 3) == 12
    # the simplified form only matches when horizon == window
    assert compute_P(10, 5, 3, 3, printed_form=True) == 9
    assert compute_P(5, 5, 3, 3, printed_form=True) == compute_P(5, 5, 3, 3)
    with pytest.raises(ValueError):
        compute_P(10, 3, 3, 3)


def test_feasibility_check():
    assert feasibility_check(10, 5, 3, 3) is None
    assert "does not divide" in feasibility_check(10, 3, 3, 3)
    # 1 camera, window 1, 2 regions: a window has 1 slot for 2 looks
    assert feasibility_check(1, 1, 1, 2) is not None
    # supply exceeds targets: 4 cameras, 1 region, no groups
    assert "absorb" in feasibility_check(4, 4, 4, 1, n_groups=0)
    assert feasibility_check(4, 4, 4, 1, n_groups=5) is None


def test_graph_shape_no_groups():
    graph = build_graph(full_plan_values(3, 3, 0, 10, 5))
    assert len(graph.nodes) == 67
    # 90 looks + 30 window arcs + 6 surplus arcs
    assert len(graph.arcs) == 126
    assert graph.sink_demand == 24


def test_graph_shape_benchmark(paper_scale_pv):
    graph = build_graph(paper_scale_pv)
    assert len(graph.nodes) == 367
    assert len(graph.arcs) == 1326
    assert graph.sink_demand == 24
    kinds = {}
    for a in graph.arcs:
        kinds[a.kind] = kinds.get(a.kind, 0) + 1
    assert kinds[ArcKind.CAPTURE] == 900
    assert kinds[ArcKind.LOOK] == 90
    assert kinds[ArcKind.CARRY] == 270
    assert kinds[ArcKind.GROUP_SINK] == 30
    assert kinds[ArcKind.WINDOW] == 30
    assert kinds[ArcKind.SURPLUS] == 6


def test_node_indexers_match_node_list(paper_scale_pv):
    graph = build_graph(paper_scale_pv)
    nd = graph.nodes[graph.camera_node(2, 7)]
    assert (nd.kind, nd.entity, nd.t) == (NodeKind.CAMERA, 2, 7)
    nd = graph.nodes[graph.group_node(13, 1)]
    assert (nd.kind, nd.entity, nd.t) == (NodeKind.GROUP, 13, 1)
    nd = graph.nodes[graph.fixed_node(0, 10)]
    assert (nd.kind, nd.entity, nd.t) == (NodeKind.FIXED, 0, 10)
    nd = graph.nodes[graph.demand_node(5)]
    assert nd.kind is NodeKind.DEMAND
    assert graph.nodes[graph.sink_node].kind is NodeKind.SINK
    assert graph.sink_node == len(graph.nodes) - 1


def test_balances(paper_scale_pv):
    graph = build_graph(paper_scale_pv)
    total = sum(nd.balance for nd in graph.nodes)
    assert total == 0
    cameras = [nd for nd in graph.nodes if nd.kind is NodeKind.CAMERA]
    assert all(nd.balance == 1 for nd in cameras)
    demands = [nd for nd in graph.nodes if nd.kind is NodeKind.DEMAND]
    assert all(nd.balance == -1 for nd in demands)
    assert graph.nodes[graph.sink_node].balance == -24


def test_interrogated_supply():
    pv = full_plan_values(2, 2, 3, 4, 2, interrogated=frozenset({1}))
    graph = build_graph(pv)
    assert graph.sink_demand == 2 * 4 - 4 + 1
    assert graph.nodes[graph.group_node(1, 1)].balance == 1
    assert graph.nodes[graph.group_node(0, 1)].balance == 0
    assert graph.nodes[graph.group_node(1, 2)].balance == 0


def test_arc_values_scaled_with_period_tiebreak():
    pv = full_plan_values(1, 1, 1, 10, 5, capture_value=5, look_value=2)
    graph = build_graph(pv)
    # raw value v becomes v * 2H minus 2(t-1) for captures, (t-1) for looks
    for a in graph.arcs:
        t = graph.nodes[a.tail].t
        if a.kind is ArcKind.CAPTURE:
            assert a.value == 5 * 20 - 2 * (t - 1)
        elif a.kind is ArcKind.LOOK:
            assert a.value == 2 * 20 - (t - 1)
        else:
            assert a.value == 0
    # ordering by raw value survives the tie-break shaping
    cap_last = 5 * 20 - 2 * 9
    look_first = 2 * 20
    assert cap_last > look_first


def test_arc_value_clamp_and_negative():
    pv = full_plan_values(1, 1, 1, 2, 2, capture_value=VALUE_CAP + 5)
    graph = build_graph(pv)
    captures = [a for a in graph.arcs if a.kind is ArcKind.CAPTURE]
    assert captures[0].value == VALUE_CAP * 4
    pv_bad = full_plan_values(1, 1, 1, 2, 2, capture_value=-1)
    with pytest.raises(ValueError):
        build_graph(pv_bad)


def test_arcs_run_forward(paper_scale_pv):
    graph = build_graph(paper_scale_pv)
    assert all(a.tail < a.head for a in graph.arcs)
    assert all(a.cap >= 1 for a in graph.arcs)


def test_key_range_validation():
    pv = full_plan_values(1, 1, 1, 2, 2)
    pv.group_arcs[(0, 5, 1)] = 3
    with pytest.raises(ValueError):
        build_graph(pv)
    pv = full_plan_values(1, 1, 1, 2, 2)
    pv.fixed_arcs[(0, 0, 3)] = 3
    with pytest.raises(ValueError):
        build_graph(pv)
    pv = full_plan_values(1, 1, 1, 2, 2, interrogated=frozenset({4}))
    with pytest.raises(ValueError):
        build_graph(pv)


def test_uniform_infeasible_shapes_rejected():
    # 1 camera cannot give 2 regions a look in a 1-period window
    with pytest.raises(ValueError):
        build_graph(full_plan_values(1, 2, 1, 1, 1))
    # more mandatory looks than camera slots
    with pytest.raises(ValueError):
        build_graph(full_plan_values(1, 2, 0, 2, 1))


def test_custom_demands_validation():
    def pv_with(demands):
        pv = full_plan_values(1, 1, 1, 4, 2)
        pv.demands = demands
        return pv

    # coverage gap: period 4 belongs to no demand
    with pytest.raises(ValueError):
        build_graph(pv_with((DemandSpec(0, (1, 2, 3)),)))
    # overlap: period 2 claimed twice
    with pytest.raises(ValueError):
        build_graph(
            pv_with((DemandSpec(0, (1, 2)), DemandSpec(0, (2, 3, 4))))
        )
    with pytest.raises(ValueError):
        build_graph(pv_with((DemandSpec(0, (), True), DemandSpec(0, (1, 2, 3, 4)))))
    with pytest.raises(ValueError):
        build_graph(pv_with((DemandSpec(2, (1, 2, 3, 4)),)))
    with pytest.raises(ValueError):
        build_graph(pv_with((DemandSpec(0, (1, 2, 3, 4, 5)),)))


def test_custom_demands_optional_window():
    pv = full_plan_values(1, 1, 1, 4, 2)
    pv.demands = (
        DemandSpec(0, (1, 2), required=True),
        DemandSpec(0, (3, 4), required=False),
    )
    graph = build_graph(pv)
    assert graph.sink_demand == 4 - 1
    assert not graph.uniform_windowed()
    # optional demand node has balance 0 but still a surplus outlet of 2
    d1 = graph.nodes[graph.demand_node(1)]
    assert d1.balance == 0
    surplus = [
        a for a in graph.arcs
        if a.kind is ArcKind.SURPLUS and a.tail == graph.demand_node(1)
    ]
    assert len(surplus) == 1 and surplus[0].cap == 2


def test_uniform_windowed_flag(paper_scale_pv):
    graph = build_graph(paper_scale_pv)
    assert graph.uniform_windowed()
    pv = full_plan_values(1, 1, 1, 4, 2)
    pv.demands = uniform_demands(4, 2, 1)
    assert build_graph(pv).uniform_windowed()


def test_dump_round_trip_stability(paper_scale_pv):
    graph = build_graph(paper_scale_pv)
    text = dump_graph(graph)
    assert text == dump_graph(build_graph(paper_scale_pv))
    assert f"N {graph.sink_node} sink - - -24" in text
    assert len(text.splitlines()) == len(graph.nodes) + len(graph.arcs)
    out = dump_solution(graph, [0] * len(graph.arcs))
    assert out.splitlines()[-1].endswith(" 0")  # flow column appended
    with pytest.raises(ValueError):
        dump_solution(graph, [0, 1])

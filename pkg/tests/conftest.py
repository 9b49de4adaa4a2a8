"""Shared builders for flow-model and solver tests."""

import pytest

from ptzflow.flow_model import PlanValues


def full_plan_values(n_cameras, n_regions, n_groups, horizon, window,
                     capture_value=5, look_value=2, interrogated=frozenset()):
    """Uniform instance with every arc present at a constant raw value."""
    group_arcs = {
        (i, j, t): capture_value
        for i in range(n_cameras)
        for j in range(n_groups)
        for t in range(1, horizon + 1)
    }
    fixed_arcs = {
        (i, k, t): look_value
        for i in range(n_cameras)
        for k in range(n_regions)
        for t in range(1, horizon + 1)
    }
    return PlanValues(
        n_cameras=n_cameras,
        n_regions=n_regions,
        group_ids=list(range(n_groups)),
        horizon=horizon,
        window=window,
        group_arcs=group_arcs,
        fixed_arcs=fixed_arcs,
        interrogated=interrogated,
    )


@pytest.fixture
def paper_scale_pv():
    """The benchmark shape: 3 cameras, 3 regions, 30 groups, H=10, T=5."""
    return full_plan_values(3, 3, 30, 10, 5)

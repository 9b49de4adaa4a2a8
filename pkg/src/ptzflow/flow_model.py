"""Time-expanded network-flow model of the camera scheduling problem.

For a horizon of H periods, each camera contributes one unit of supply per
period (node R(i,t)). A unit routed through a group's capture chain
K(j,t) -> K(j,t+1) -> ... -> sink records an interrogation; a unit routed
through a fixed node F(k,t) into the demand node D of the enclosing
window records a wide look. Every required demand node absorbs exactly
one unit (the mandatory look per region per window); extra looks continue
to the sink, whose demand P balances the graph. Unit capacities
everywhere except the demand->sink surplus arcs give an integral optimum.

By default the windows tile the horizon uniformly: H/T windows of T
periods each, every one required, giving P = H*l - (H/T)*m. A plan that
starts mid-window passes explicit DemandSpec entries instead: the current
window may already be satisfied by an earlier look (required=False, the
node just forwards flow), and a trailing window cut off by the horizon is
likewise optional because the next plan will see it whole.

Node indices are topologically sorted: every arc points from a lower
index to a higher one. The solver kernels rely on this for their initial
potential pass.
"""

import logging
from dataclasses import dataclass, field
from enum import Enum

logger = logging.getLogger(__name__)

VALUE_CAP = 1 << 40
_clamp_warned = False


class NodeKind(Enum):
    CAMERA = "camera"
    GROUP = "group"
    FIXED = "fixed"
    DEMAND = "demand"
    SINK = "sink"


class ArcKind(Enum):
    CAPTURE = "capture"  # R(i,t) -> K(j,t)
    LOOK = "look"  # R(i,t) -> F(k,t)
    CARRY = "carry"  # K(j,t) -> K(j,t+1)
    GROUP_SINK = "group_sink"  # K(j,H) -> sink
    WINDOW = "window"  # F(k,t) -> D(k,tau)
    SURPLUS = "surplus"  # D(k,tau) -> sink


@dataclass(frozen=True)
class FlowNode:
    index: int
    kind: NodeKind
    entity: int  # camera id / group index / region index; -1 for sink
    t: int  # period, or window index for demand nodes; 0 for sink
    balance: int  # positive supply, negative demand


@dataclass(frozen=True)
class FlowArc:
    index: int
    kind: ArcKind
    tail: int
    head: int
    cap: int
    value: int  # objective gain per unit of flow


@dataclass(frozen=True)
class DemandSpec:
    """One fixed-look window for one region.

    periods lists the plan periods whose look at `region` can serve it.
    required=False turns the node into a pass-through outlet (already
    satisfied, or cut off by the horizon): looks remain possible but none
    is mandatory.
    """

    region: int
    periods: tuple[int, ...]
    required: bool = True


def uniform_demands(horizon: int, window: int, n_regions: int) -> tuple[DemandSpec, ...]:
    """The default tiling: H/T required windows of T periods per region."""
    if window < 1 or horizon % window != 0:
        raise ValueError(f"window {window} must divide horizon {horizon}")
    return tuple(
        DemandSpec(k, tuple(range((tau - 1) * window + 1, tau * window + 1)))
        for tau in range(1, horizon // window + 1)
        for k in range(n_regions)
    )


@dataclass
class PlanValues:
    """Everything build_graph needs: dimensions plus per-arc values.

    group_arcs maps (camera, group index, period) to a value; a missing
    key means the capture is not available there (e.g. the group departs
    first). fixed_arcs maps (camera, region, period) likewise.
    interrogated lists group indices already captured before this plan;
    they contribute +1 supply at K(j,1). demands overrides the uniform
    window tiling; None derives it from horizon and window.
    """

    n_cameras: int
    n_regions: int
    group_ids: list[int]
    horizon: int
    window: int
    group_arcs: dict[tuple[int, int, int], int]
    fixed_arcs: dict[tuple[int, int, int], int]
    interrogated: frozenset[int] = frozenset()
    demands: tuple[DemandSpec, ...] | None = None


def compute_P(horizon: int, window: int, n_cameras: int, n_regions: int,
              printed_form: bool = False) -> int:
    """Sink demand balancing the time-expanded graph.

    printed_form=True returns window*l - (H/T)*m instead, which only
    conserves flow when horizon == window; it exists for comparison and
    is never used to build a graph.
    """
    if window < 1 or horizon % window != 0:
        raise ValueError(f"window {window} must divide horizon {horizon}")
    lead = window if printed_form else horizon
    return lead * n_cameras - (horizon // window) * n_regions


def feasibility_check(horizon: int, window: int, n_cameras: int, n_regions: int,
                      n_groups: int | None = None) -> str | None:
    """Static sanity checks; returns the first violated condition or None."""
    if horizon < 1 or window < 1 or horizon % window != 0:
        return f"window {window} does not divide horizon {horizon}"
    if compute_P(horizon, window, n_cameras, n_regions) < 0:
        return (
            f"sink demand negative: {n_cameras} cameras cannot cover "
            f"{n_regions} regions every {window} periods"
        )
    if n_cameras * window < n_regions:
        return (
            f"a window has {n_cameras * window} camera slots for "
            f"{n_regions} mandatory looks"
        )
    if n_groups is not None and n_cameras > n_regions + n_groups:
        return (
            f"{n_cameras} cameras but only {n_regions + n_groups} "
            f"targets to absorb a period's supply"
        )
    return None


@dataclass
class FlowGraph:
    nodes: list[FlowNode]
    arcs: list[FlowArc]
    n_cameras: int
    n_regions: int
    horizon: int
    window: int
    group_ids: list[int]
    interrogated: frozenset[int]
    demands: tuple[DemandSpec, ...]
    sink_demand: int
    _block: int = field(init=False)

    def __post_init__(self):
        self._block = self.n_cameras + len(self.group_ids) + self.n_regions

    @property
    def n_groups(self) -> int:
        return len(self.group_ids)

    def camera_node(self, cam: int, t: int) -> int:
        return (t - 1) * self._block + cam

    def group_node(self, g: int, t: int) -> int:
        return (t - 1) * self._block + self.n_cameras + g

    def fixed_node(self, k: int, t: int) -> int:
        return (t - 1) * self._block + self.n_cameras + self.n_groups + k

    def demand_node(self, d: int) -> int:
        return self.horizon * self._block + d

    @property
    def sink_node(self) -> int:
        return self.horizon * self._block + len(self.demands)

    def uniform_windowed(self) -> bool:
        if self.window < 1 or self.horizon % self.window != 0:
            return False
        return self.demands == uniform_demands(self.horizon, self.window, self.n_regions)


def build_graph(pv: PlanValues) -> FlowGraph:
    global _clamp_warned
    n = len(pv.group_ids)
    if pv.demands is None:
        diag = feasibility_check(pv.horizon, pv.window, pv.n_cameras, pv.n_regions)
        if diag is not None:
            raise ValueError(diag)
        demands = uniform_demands(pv.horizon, pv.window, pv.n_regions)
    else:
        demands = tuple(pv.demands)
    for (i, j, t) in pv.group_arcs:
        if not (0 <= i < pv.n_cameras and 0 <= j < n and 1 <= t <= pv.horizon):
            raise ValueError(f"group arc key ({i},{j},{t}) out of range")
    for (i, k, t) in pv.fixed_arcs:
        if not (0 <= i < pv.n_cameras and 0 <= k < pv.n_regions and 1 <= t <= pv.horizon):
            raise ValueError(f"fixed arc key ({i},{k},{t}) out of range")
    if any(j < 0 or j >= n for j in pv.interrogated):
        raise ValueError("interrogated group index out of range")

    # every (region, period) must feed exactly one demand node, so that a
    # look is routable in any period and counted in exactly one window
    spec_of: dict[tuple[int, int], int] = {}
    n_required = 0
    for d, spec in enumerate(demands):
        if not spec.periods and spec.required:
            raise ValueError(f"demand {d}: required but has no periods")
        if not 0 <= spec.region < pv.n_regions:
            raise ValueError(f"demand {d}: region {spec.region} out of range")
        for t in spec.periods:
            if not 1 <= t <= pv.horizon:
                raise ValueError(f"demand {d}: period {t} out of range")
            if (spec.region, t) in spec_of:
                raise ValueError(f"(region {spec.region}, period {t}) in two demands")
            spec_of[(spec.region, t)] = d
        n_required += spec.required
    for k in range(pv.n_regions):
        for t in range(1, pv.horizon + 1):
            if (k, t) not in spec_of:
                raise ValueError(f"(region {k}, period {t}) belongs to no demand")
    sink_demand = pv.horizon * pv.n_cameras - n_required + len(pv.interrogated)
    if sink_demand < 0:
        raise ValueError(
            f"{n_required} mandatory looks exceed "
            f"{pv.horizon * pv.n_cameras} camera-period slots"
        )
    graph = FlowGraph(
        nodes=[],
        arcs=[],
        n_cameras=pv.n_cameras,
        n_regions=pv.n_regions,
        horizon=pv.horizon,
        window=pv.window,
        group_ids=list(pv.group_ids),
        interrogated=frozenset(pv.interrogated),
        demands=demands,
        sink_demand=sink_demand,
    )

    nodes = graph.nodes
    for t in range(1, pv.horizon + 1):
        for i in range(pv.n_cameras):
            nodes.append(FlowNode(graph.camera_node(i, t), NodeKind.CAMERA, i, t, 1))
        for j in range(n):
            supply = 1 if (t == 1 and j in pv.interrogated) else 0
            nodes.append(FlowNode(graph.group_node(j, t), NodeKind.GROUP, j, t, supply))
        for k in range(pv.n_regions):
            nodes.append(FlowNode(graph.fixed_node(k, t), NodeKind.FIXED, k, t, 0))
    for d, spec in enumerate(demands):
        first = spec.periods[0] if spec.periods else 0
        nodes.append(
            FlowNode(
                graph.demand_node(d), NodeKind.DEMAND, spec.region, first,
                -1 if spec.required else 0,
            )
        )
    nodes.append(FlowNode(graph.sink_node, NodeKind.SINK, -1, 0, -sink_demand))

    def clamp(v) -> int:
        global _clamp_warned
        v = int(v)
        if v < 0:
            raise ValueError("arc values must be nonnegative")
        if v > VALUE_CAP:
            if not _clamp_warned:
                logger.warning("arc value %d clamped to %d", v, VALUE_CAP)
                _clamp_warned = True
            return VALUE_CAP
        return v

    arcs = graph.arcs

    def add(kind, tail, head, cap, value=0):
        arcs.append(FlowArc(len(arcs), kind, tail, head, cap, value))

    # scale values so a unit of raw value always outweighs the period
    # tie-breaks below. Among otherwise equal placements the earliest
    # period wins (otherwise replanning defers urgent work forever), and
    # captures lean early twice as hard as looks so a mandatory look
    # yields the contested early slot to an equal-value capture.
    scale = 2 * pv.horizon
    for t in range(1, pv.horizon + 1):
        for i in range(pv.n_cameras):
            tail = graph.camera_node(i, t)
            for j in range(n):
                v = pv.group_arcs.get((i, j, t))
                if v is not None:
                    add(ArcKind.CAPTURE, tail, graph.group_node(j, t), 1,
                        clamp(v) * scale - 2 * (t - 1))
            for k in range(pv.n_regions):
                v = pv.fixed_arcs.get((i, k, t))
                if v is not None:
                    add(ArcKind.LOOK, tail, graph.fixed_node(k, t), 1,
                        clamp(v) * scale - (t - 1))
    for j in range(n):
        for t in range(1, pv.horizon):
            add(ArcKind.CARRY, graph.group_node(j, t), graph.group_node(j, t + 1), 1)
    for j in range(n):
        add(ArcKind.GROUP_SINK, graph.group_node(j, pv.horizon), graph.sink_node, 1)
    for t in range(1, pv.horizon + 1):
        for k in range(pv.n_regions):
            add(ArcKind.WINDOW, graph.fixed_node(k, t), graph.demand_node(spec_of[(k, t)]), 1)
    for d, spec in enumerate(demands):
        spare = len(spec.periods) - (1 if spec.required else 0)
        if spare > 0:
            add(ArcKind.SURPLUS, graph.demand_node(d), graph.sink_node, spare)

    for arc in arcs:  # the kernels' topological-order contract
        assert arc.tail < arc.head
    return graph


def _node_line(node: FlowNode) -> str:
    entity = "-" if node.kind is NodeKind.SINK else str(node.entity)
    t = "-" if node.kind is NodeKind.SINK else str(node.t)
    return f"N {node.index} {node.kind.value} {entity} {t} {node.balance}"


def dump_graph(graph: FlowGraph) -> str:
    """Plain-text graph listing: one node or arc per line."""
    lines = [_node_line(nd) for nd in graph.nodes]
    lines += [f"A {a.tail} {a.head} {a.cap} {a.value}" for a in graph.arcs]
    return "\n".join(lines) + "\n"


def dump_solution(graph: FlowGraph, flows: list[int]) -> str:
    """Graph listing with a trailing per-arc flow column."""
    if len(flows) != len(graph.arcs):
        raise ValueError("flow vector length mismatch")
    lines = [_node_line(nd) for nd in graph.nodes]
    lines += [
        f"A {a.tail} {a.head} {a.cap} {a.value} {flows[a.index]}" for a in graph.arcs
    ]
    return "\n".join(lines) + "\n"

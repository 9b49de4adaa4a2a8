"""Exact solve of the time-expanded scheduling graph.

The heavy lifting happens in a min-cost-flow kernel: the compiled
extension (ptzflow._mincost) when it built, otherwise the pure-Python
twin. PTZFLOW_BACKEND=python forces the fallback. Maximizing captured
value = min-cost flow on negated arc values; unit capacities make the
optimum integral, and extract_schedule reads it back as one action per
camera per period.

brute_force_oracle computes the same optimum by exhaustive dynamic
programming over (slot, used-groups, window-coverage) states. It shares
no code with the flow kernels and exists to cross-check them.
"""

import logging
import os
from dataclasses import dataclass
from enum import Enum

from .flow_model import ArcKind, FlowGraph, NodeKind, PlanValues, build_graph

logger = logging.getLogger(__name__)

from . import _mincost_py as _py_kernel

try:
    from . import _mincost as _c_kernel
except ImportError:  # extension not built; pure kernel carries the load
    _c_kernel = None

_KERNELS = {"python": _py_kernel}
if _c_kernel is not None:
    _KERNELS["cython"] = _c_kernel

AVAILABLE_BACKENDS = tuple(sorted(_KERNELS))


def default_backend() -> str:
    env = os.environ.get("PTZFLOW_BACKEND")
    if env:
        if env not in _KERNELS:
            raise ValueError(f"PTZFLOW_BACKEND={env!r}; available: {AVAILABLE_BACKENDS}")
        return env
    return "cython" if "cython" in _KERNELS else "python"


class InfeasibleError(RuntimeError):
    """The graph admits no flow meeting every demand."""


class ActionKind(Enum):
    GROUP = "group"
    FIXED = "fixed"
    IDLE = "idle"


@dataclass(frozen=True)
class Action:
    kind: ActionKind
    target: int | None  # group index or region index; None for idle


@dataclass
class Schedule:
    """actions[camera][period-1]; period 1 is the executed one."""

    actions: list[list[Action]]

    @property
    def n_cameras(self) -> int:
        return len(self.actions)

    @property
    def horizon(self) -> int:
        return len(self.actions[0]) if self.actions else 0

    def first_period(self) -> list[Action]:
        return [row[0] for row in self.actions]


@dataclass
class FlowSolution:
    flows: list[int]
    objective: int
    backend: str


def solve(graph: FlowGraph, backend: str | None = None) -> FlowSolution:
    """Route every unit of supply at maximum total arc value."""
    name = backend or default_backend()
    kernel = _KERNELS[name]
    tails = [a.tail for a in graph.arcs]
    heads = [a.head for a in graph.arcs]
    caps = [a.cap for a in graph.arcs]
    costs = [-a.value for a in graph.arcs]
    supply = [nd.balance for nd in graph.nodes]
    flows, pushed, total = kernel.solve_min_cost_flow(
        len(graph.nodes), tails, heads, caps, costs, supply
    )
    flows = [int(f) for f in flows]
    if pushed < total:
        raise InfeasibleError(_diagnose(graph, flows, total - pushed))
    objective = sum(a.value * f for a, f in zip(graph.arcs, flows))
    return FlowSolution(flows=flows, objective=objective, backend=name)


def _flow_balance(graph: FlowGraph, flows: list[int]) -> list[int]:
    bal = [0] * len(graph.nodes)
    for a, f in zip(graph.arcs, flows):
        bal[a.tail] += f
        bal[a.head] -= f
    return bal


def _diagnose(graph: FlowGraph, flows: list[int], shortfall: int) -> str:
    bal = _flow_balance(graph, flows)
    for nd in graph.nodes:
        if nd.kind is NodeKind.DEMAND and bal[nd.index] > nd.balance:
            return (
                f"infeasible: no camera can cover region {nd.entity} in its "
                f"window starting period {nd.t} ({shortfall} unit(s) unrouted)"
            )
    for nd in graph.nodes:
        if nd.kind is NodeKind.CAMERA and bal[nd.index] < nd.balance:
            return (
                f"infeasible: camera {nd.entity} has no routable action in "
                f"period {nd.t} ({shortfall} unit(s) unrouted)"
            )
    return f"infeasible: {shortfall} unit(s) of supply unrouted"


def validate_solution(graph: FlowGraph, sol: FlowSolution) -> list[str]:
    """All structural constraints; returns human-readable violations."""
    bad = []
    for a, f in zip(graph.arcs, sol.flows):
        if not isinstance(f, int):
            bad.append(f"arc {a.index}: non-integral flow {f!r}")
        elif not 0 <= f <= a.cap:
            bad.append(f"arc {a.index}: flow {f} outside [0, {a.cap}]")
    bal = _flow_balance(graph, sol.flows)
    for nd in graph.nodes:
        if bal[nd.index] != nd.balance:
            bad.append(
                f"node {nd.index} ({nd.kind.value}): net outflow "
                f"{bal[nd.index]} != balance {nd.balance}"
            )
    captures = {j: 0 for j in range(graph.n_groups)}
    looks_per_demand = [0] * len(graph.demands)
    demand_base = graph.demand_node(0)
    for a, f in zip(graph.arcs, sol.flows):
        if a.kind is ArcKind.CAPTURE and f:
            captures[graph.nodes[a.head].entity] += f
        if a.kind is ArcKind.WINDOW and f:
            looks_per_demand[a.head - demand_base] += f
    for j, c in captures.items():
        limit = 0 if j in graph.interrogated else 1
        if c > limit:
            bad.append(f"group {j} captured {c} times (limit {limit})")
    for d, spec in enumerate(graph.demands):
        if spec.required and looks_per_demand[d] < 1:
            bad.append(
                f"region {spec.region} has no fixed look in its window "
                f"(periods {spec.periods[0]}..{spec.periods[-1]})"
            )
    return bad


def extract_schedule(graph: FlowGraph, sol: FlowSolution) -> Schedule:
    """One action per camera per period from the unit flows."""
    chosen: dict[tuple[int, int], Action] = {}
    for a, f in zip(graph.arcs, sol.flows):
        if f == 0 or a.kind not in (ArcKind.CAPTURE, ArcKind.LOOK):
            continue
        tail = graph.nodes[a.tail]
        head = graph.nodes[a.head]
        key = (tail.entity, tail.t)
        if key in chosen:
            raise ValueError(f"camera {key[0]} period {key[1]} has two actions")
        kind = ActionKind.GROUP if a.kind is ArcKind.CAPTURE else ActionKind.FIXED
        chosen[key] = Action(kind, head.entity)
    actions = []
    for i in range(graph.n_cameras):
        row = []
        for t in range(1, graph.horizon + 1):
            act = chosen.get((i, t))
            if act is None:
                raise ValueError(f"camera {i} period {t} has no action in the flow")
            row.append(act)
        actions.append(row)
    return Schedule(actions)


def rescore_schedule(graph: FlowGraph, sched: Schedule) -> int:
    """Sum of arc values selected by a schedule; must equal the objective."""
    value_of = {}
    for a in graph.arcs:
        if a.kind in (ArcKind.CAPTURE, ArcKind.LOOK):
            tail = graph.nodes[a.tail]
            head = graph.nodes[a.head]
            value_of[(tail.entity, tail.t, a.kind, head.entity)] = a.value
    total = 0
    for i, row in enumerate(sched.actions):
        for t, act in enumerate(row, start=1):
            kind = ArcKind.CAPTURE if act.kind is ActionKind.GROUP else ArcKind.LOOK
            total += value_of[(i, t, kind, act.target)]
    return total


MAX_ORACLE_SLOTS = 12


def brute_force_oracle(graph: FlowGraph) -> FlowSolution:
    """Exhaustive optimum over all camera-period assignments.

    State space: (slot, used-group bitmask, current-window coverage
    bitmask), slots ordered period-major then camera. Every state
    transition is enumerated, so this is an independent check of the
    flow reduction, not of the kernel's own machinery.
    """
    n_slots = graph.horizon * graph.n_cameras
    if n_slots > MAX_ORACLE_SLOTS:
        raise ValueError(f"oracle limited to {MAX_ORACLE_SLOTS} slots, got {n_slots}")
    if not graph.uniform_windowed():
        raise ValueError("oracle handles only the uniform window tiling")
    l, n, m = graph.n_cameras, graph.n_groups, graph.n_regions
    window_slots = l * graph.window
    full_wm = (1 << m) - 1
    group_arcs: dict[tuple[int, int], list[tuple[int, int, int]]] = {}
    fixed_arcs: dict[tuple[int, int], list[tuple[int, int, int]]] = {}
    for a in graph.arcs:
        tail = graph.nodes[a.tail]
        head = graph.nodes[a.head]
        if a.kind is ArcKind.CAPTURE:
            group_arcs.setdefault((tail.entity, tail.t), []).append(
                (head.entity, a.value, a.index)
            )
        elif a.kind is ArcKind.LOOK:
            fixed_arcs.setdefault((tail.entity, tail.t), []).append(
                (head.entity, a.value, a.index)
            )
    start_gm = 0
    for j in graph.interrogated:
        start_gm |= 1 << j
    NEG = None  # sentinel for "no completion exists"
    memo: dict[tuple[int, int, int, int], tuple] = {}

    def best_from(slot: int, gm: int, wm: int, pm: int):
        # pm: regions already taken this period (one camera per F(k,t))
        if slot == n_slots:
            # coverage was enforced at each window boundary on the way here
            return (0, None)
        key = (slot, gm, wm, pm)
        hit = memo.get(key)
        if hit is not None:
            return hit
        t = slot // l + 1
        i = slot % l
        period_end = (slot + 1) % l == 0
        window_end = (slot + 1) % window_slots == 0
        best_val, best_choice = NEG, None
        for j, value, arc in group_arcs.get((i, t), ()):
            if gm >> j & 1:
                continue
            if window_end and m and wm != full_wm:
                continue
            sub, _ = best_from(
                slot + 1, gm | (1 << j), 0 if window_end else wm, 0 if period_end else pm
            )
            if sub is not NEG and (best_val is NEG or value + sub > best_val):
                best_val, best_choice = value + sub, ("g", j, arc)
        for k, value, arc in fixed_arcs.get((i, t), ()):
            if pm >> k & 1:
                continue
            wm2 = wm | (1 << k)
            if window_end and m and wm2 != full_wm:
                continue
            sub, _ = best_from(
                slot + 1, gm, 0 if window_end else wm2, 0 if period_end else pm | (1 << k)
            )
            if sub is not NEG and (best_val is NEG or value + sub > best_val):
                best_val, best_choice = value + sub, ("f", k, arc)
        memo[key] = (best_val, best_choice)
        return memo[key]

    total_val, _ = best_from(0, start_gm, 0, 0)
    if total_val is NEG:
        raise InfeasibleError("infeasible: oracle found no complete assignment")

    # replay the argmax path and rebuild the full flow vector
    flows = [0] * len(graph.arcs)
    arc_index = {}
    for a in graph.arcs:
        if a.kind is ArcKind.CARRY:
            arc_index[("carry", graph.nodes[a.tail].entity, graph.nodes[a.tail].t)] = a.index
        elif a.kind is ArcKind.GROUP_SINK:
            arc_index[("gsink", graph.nodes[a.tail].entity)] = a.index
        elif a.kind is ArcKind.WINDOW:
            arc_index[("window", graph.nodes[a.tail].entity, graph.nodes[a.tail].t)] = a.index
        elif a.kind is ArcKind.SURPLUS:
            arc_index[("surplus", graph.nodes[a.tail].entity, graph.nodes[a.tail].t)] = a.index
    slot, gm, wm, pm = 0, start_gm, 0, 0
    captured_at: dict[int, int] = {}
    look_count: dict[tuple[int, int], int] = {}
    while slot < n_slots:
        _, choice = best_from(slot, gm, wm, pm)
        kind, ent, arc = choice
        flows[arc] = 1
        t = slot // l + 1
        if kind == "g":
            gm |= 1 << ent
            captured_at[ent] = t
        else:
            wm |= 1 << ent
            pm |= 1 << ent
            tau = (t + graph.window - 1) // graph.window
            flows[arc_index[("window", ent, t)]] = 1
            look_count[(ent, tau)] = look_count.get((ent, tau), 0) + 1
        if (slot + 1) % l == 0:
            pm = 0
        if (slot + 1) % window_slots == 0:
            wm = 0
        slot += 1
    for j in list(captured_at) + list(graph.interrogated):
        start = 1 if j in graph.interrogated else captured_at[j]
        for t in range(start, graph.horizon):
            flows[arc_index[("carry", j, t)]] = 1
        flows[arc_index[("gsink", j)]] = 1
    for (k, tau), c in look_count.items():
        if c > 1:  # demand nodes carry the first period of their window
            flows[arc_index[("surplus", k, (tau - 1) * graph.window + 1)]] = c - 1
    objective = sum(a.value * f for a, f in zip(graph.arcs, flows))
    assert objective == total_val
    return FlowSolution(flows=flows, objective=objective, backend="oracle")


def random_instance(rng, max_cameras: int = 2, max_regions: int = 3,
                    max_groups: int = 5, max_horizon: int = 6) -> PlanValues:
    """Random solvable-shaped instance small enough for the oracle.

    Structural infeasibility (a window no camera can cover, a period
    with nothing to absorb a camera) is allowed: callers check that the
    solver and the oracle agree on it.
    """
    l = int(rng.integers(1, max_cameras + 1))
    horizon = int(rng.integers(1, max_horizon + 1))
    if horizon * l > MAX_ORACLE_SLOTS:
        horizon = MAX_ORACLE_SLOTS // l
    divisors = [d for d in range(1, horizon + 1) if horizon % d == 0]
    window = int(rng.choice(divisors))
    m = int(rng.integers(0, max_regions + 1))
    m = min(m, l * window)
    n = int(rng.integers(0, max_groups + 1))
    group_arcs = {}
    for i in range(l):
        for j in range(n):
            for t in range(1, horizon + 1):
                if rng.random() < 0.75:
                    group_arcs[(i, j, t)] = int(rng.integers(0, 200))
    fixed_arcs = {}
    for i in range(l):
        for k in range(m):
            for t in range(1, horizon + 1):
                if rng.random() < 0.9:
                    fixed_arcs[(i, k, t)] = int(rng.integers(0, 40))
    interrogated = frozenset(j for j in range(n) if rng.random() < 0.15)
    return PlanValues(
        n_cameras=l,
        n_regions=m,
        group_ids=list(range(n)),
        horizon=horizon,
        window=window,
        group_arcs=group_arcs,
        fixed_arcs=fixed_arcs,
        interrogated=interrogated,
    )


def solve_instance(pv: PlanValues, backend: str | None = None):
    """Convenience: build + solve, returning (graph, solution)."""
    graph = build_graph(pv)
    return graph, solve(graph, backend=backend)

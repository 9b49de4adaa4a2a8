"""Benchmark the min-cost-flow kernels (pure Python vs compiled).

Builds planning graphs at a few realistic sizes, solves each with every
available backend, and prints per-solve times. Run from the repo root:

    python3 benchmarks/bench_mincost.py [--repeat N]
"""

import argparse
import time

import numpy as np

from ptzflow.flow_model import PlanValues, build_graph
from ptzflow.solver import AVAILABLE_BACKENDS, solve


def dense_instance(l, m, n, horizon, window, seed):
    """Every camera/group/region arc present, all groups staying."""
    rng = np.random.default_rng(seed)
    group_ids = tuple(range(n))
    group_arcs = {}
    fixed_arcs = {}
    for t in range(1, horizon + 1):
        for i in range(l):
            for jdx in range(n):
                group_arcs[(i, jdx, t)] = int(rng.integers(1, 400))
            for k in range(m):
                fixed_arcs[(i, k, t)] = int(rng.integers(0, 40))
    return PlanValues(
        n_cameras=l,
        n_regions=m,
        group_ids=group_ids,
        horizon=horizon,
        window=window,
        group_arcs=group_arcs,
        fixed_arcs=fixed_arcs,
        interrogated=frozenset(),
    )


def bench(graph, backend, repeat):
    best = float("inf")
    objective = None
    for _ in range(repeat):
        started = time.perf_counter()
        sol = solve(graph, backend=backend)
        best = min(best, time.perf_counter() - started)
        objective = sol.objective
    return best, objective


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()

    cases = [
        ("3 cams, 30 groups", dense_instance(3, 3, 30, 10, 5, seed=11)),
        ("3 cams, 80 groups", dense_instance(3, 3, 80, 10, 5, seed=12)),
        ("4 cams, 150 groups", dense_instance(4, 4, 150, 12, 6, seed=13)),
    ]
    print(f"backends: {', '.join(AVAILABLE_BACKENDS)}  (best of {args.repeat})")
    for label, pv in cases:
        graph = build_graph(pv)
        print(f"\n{label}: {len(graph.nodes)} nodes, {len(graph.arcs)} arcs")
        timings = {}
        objectives = set()
        for backend in AVAILABLE_BACKENDS:
            elapsed, objective = bench(graph, backend, args.repeat)
            timings[backend] = elapsed
            objectives.add(objective)
            print(f"  {backend:>7}: {elapsed * 1000:8.2f} ms  objective={objective}")
        assert len(objectives) == 1, "backends disagree"
        if "cython" in timings and "python" in timings:
            print(f"  speedup: {timings['python'] / timings['cython']:.1f}x")


if __name__ == "__main__":
    main()

"""Successive-shortest-path min-cost flow, pure-Python kernel.

Contract shared with the compiled twin (ptzflow._mincost):

    solve_min_cost_flow(n, tails, heads, caps, costs, supply)
        -> (flows, pushed, total)

Nodes are 0..n-1 and must be topologically ordered (tails[k] < heads[k]
for every arc); supply[v] > 0 marks sources, < 0 sinks. All quantities
are integers; costs may be negative. The kernel routes as much supply as
possible at minimum cost and reports pushed units against the total; a
shortfall means the instance is infeasible and flows hold the partial
routing for diagnosis.

The topological order enables an exact one-pass computation of initial
node potentials, after which every Dijkstra runs on nonnegative reduced
costs. Heap keys are unique (dist, node) pairs, so the augmenting-path
sequence is fully deterministic and identical to the compiled kernel's.
"""

from heapq import heappop, heappush

INF = 1 << 62

BACKEND = "python"


def solve_min_cost_flow(n, tails, heads, caps, costs, supply):
    n_arcs = len(tails)
    to = []
    cap = []
    cost = []
    adj = [[] for _ in range(n + 2)]

    def add_arc(u, v, c, w):
        adj[u].append(len(to))
        to.append(v)
        cap.append(c)
        cost.append(w)
        adj[v].append(len(to))
        to.append(u)
        cap.append(0)
        cost.append(-w)

    for k in range(n_arcs):
        if not tails[k] < heads[k]:
            raise ValueError(f"arc {k} violates topological node order")
        add_arc(tails[k], heads[k], caps[k], costs[k])
    ss, tt = n, n + 1
    total = 0
    for v in range(n):
        if supply[v] > 0:
            add_arc(ss, v, supply[v], 0)
            total += supply[v]
        elif supply[v] < 0:
            add_arc(v, tt, -supply[v], 0)

    # exact shortest distances from ss in one pass over the acyclic graph
    pot = [INF] * (n + 2)
    pot[ss] = 0
    for u in [ss] + list(range(n)):
        du = pot[u]
        if du >= INF:
            continue
        for a in adj[u]:
            if cap[a] > 0 and du + cost[a] < pot[to[a]]:
                pot[to[a]] = du + cost[a]

    pushed = 0
    dist = [0] * (n + 2)
    parent = [0] * (n + 2)
    while pushed < total:
        for v in range(n + 2):
            dist[v] = INF
            parent[v] = -1
        dist[ss] = 0
        heap = [(0, ss)]
        while heap:
            d, u = heappop(heap)
            if d > dist[u]:
                continue
            if u == tt:
                break
            pu = pot[u]
            for a in adj[u]:
                if cap[a] <= 0:
                    continue
                v = to[a]
                if pot[v] >= INF:
                    continue
                nd = d + cost[a] + pu - pot[v]
                if nd < dist[v]:
                    dist[v] = nd
                    parent[v] = a
                    heappush(heap, (nd, v))
        dtt = dist[tt]
        if dtt >= INF:
            break
        for v in range(n + 2):
            if pot[v] < INF:
                pot[v] += dist[v] if dist[v] < dtt else dtt
        bottleneck = INF
        v = tt
        while v != ss:
            a = parent[v]
            if cap[a] < bottleneck:
                bottleneck = cap[a]
            v = to[a ^ 1]
        v = tt
        while v != ss:
            a = parent[v]
            cap[a] -= bottleneck
            cap[a ^ 1] += bottleneck
            v = to[a ^ 1]
        pushed += bottleneck

    flows = [caps[k] - cap[2 * k] for k in range(n_arcs)]
    return flows, pushed, total

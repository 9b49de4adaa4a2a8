# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Successive-shortest-path min-cost flow, compiled kernel.

Behavioral twin of ptzflow._mincost_py: same contract, same algorithm,
same deterministic augmenting-path sequence (unique (dist, node) heap
keys, per-node arc lists in identical insertion order). See the pure
module for the full contract description.
"""

from libc.stdlib cimport free, malloc
from libc.string cimport memset

cdef long long INF = (<long long>1) << 62

BACKEND = "cython"


cdef inline bint _heap_less(long long da, int va, long long db, int vb) noexcept:
    return da < db or (da == db and va < vb)


def solve_min_cost_flow(n, tails, heads, caps, costs, supply):
    cdef Py_ssize_t n_arcs = len(tails)
    cdef int nn = <int>n
    cdef int big_n = nn + 2
    cdef int ss = nn
    cdef int tt = nn + 1
    cdef Py_ssize_t max_arcs = 2 * n_arcs + 2 * nn
    cdef Py_ssize_t heap_cap = max_arcs + 4

    cdef int *to_ = <int *>malloc(max_arcs * sizeof(int))
    cdef long long *cap_ = <long long *>malloc(max_arcs * sizeof(long long))
    cdef long long *cost_ = <long long *>malloc(max_arcs * sizeof(long long))
    cdef long long *orig_cap = <long long *>malloc(n_arcs * sizeof(long long))
    cdef int *deg = <int *>malloc(big_n * sizeof(int))
    cdef int *adj_start = <int *>malloc((big_n + 1) * sizeof(int))
    cdef int *adj = <int *>malloc(max_arcs * sizeof(int))
    cdef int *fill = <int *>malloc(big_n * sizeof(int))
    cdef long long *pot = <long long *>malloc(big_n * sizeof(long long))
    cdef long long *dist = <long long *>malloc(big_n * sizeof(long long))
    cdef int *parent = <int *>malloc(big_n * sizeof(int))
    cdef long long *heap_d = <long long *>malloc(heap_cap * sizeof(long long))
    cdef int *heap_v = <int *>malloc(heap_cap * sizeof(int))
    if (to_ == NULL or cap_ == NULL or cost_ == NULL or orig_cap == NULL
            or deg == NULL or adj_start == NULL or adj == NULL or fill == NULL
            or pot == NULL or dist == NULL or parent == NULL
            or heap_d == NULL or heap_v == NULL):
        free(to_); free(cap_); free(cost_); free(orig_cap)
        free(deg); free(adj_start); free(adj); free(fill)
        free(pot); free(dist); free(parent); free(heap_d); free(heap_v)
        raise MemoryError()

    cdef Py_ssize_t m = 0
    cdef Py_ssize_t k
    cdef int u, v, a
    cdef long long c, w, total = 0, pushed = 0
    cdef long long d, nd, du, dtt, bottleneck
    cdef Py_ssize_t heap_size, i, child, parent_i
    cdef long long hd
    cdef int hv

    try:
        memset(deg, 0, big_n * sizeof(int))
        for k in range(n_arcs):
            u = <int>tails[k]
            v = <int>heads[k]
            if not u < v:
                raise ValueError(f"arc {k} violates topological node order")
            c = <long long>caps[k]
            w = <long long>costs[k]
            orig_cap[k] = c
            to_[m] = v; cap_[m] = c; cost_[m] = w; deg[u] += 1; m += 1
            to_[m] = u; cap_[m] = 0; cost_[m] = -w; deg[v] += 1; m += 1
        for u in range(nn):
            c = <long long>supply[u]
            if c > 0:
                to_[m] = u; cap_[m] = c; cost_[m] = 0; deg[ss] += 1; m += 1
                to_[m] = ss; cap_[m] = 0; cost_[m] = 0; deg[u] += 1; m += 1
                total += c
            elif c < 0:
                to_[m] = tt; cap_[m] = -c; cost_[m] = 0; deg[u] += 1; m += 1
                to_[m] = u; cap_[m] = 0; cost_[m] = 0; deg[tt] += 1; m += 1

        adj_start[0] = 0
        for u in range(big_n):
            adj_start[u + 1] = adj_start[u] + deg[u]
            fill[u] = adj_start[u]
        # arc index i leaves to_[i ^ 1]; walk pairs in creation order so
        # each node's list matches the pure kernel's append order
        for i in range(m):
            u = to_[i ^ 1]
            adj[fill[u]] = <int>i
            fill[u] += 1

        # one relaxation pass in (ss, 0..n-1) order: exact on the acyclic graph
        for u in range(big_n):
            pot[u] = INF
        pot[ss] = 0
        for a in range(adj_start[ss], adj_start[ss + 1]):
            i = adj[a]
            if cap_[i] > 0 and cost_[i] < pot[to_[i]]:
                pot[to_[i]] = cost_[i]
        for u in range(nn):
            du = pot[u]
            if du >= INF:
                continue
            for a in range(adj_start[u], adj_start[u + 1]):
                i = adj[a]
                if cap_[i] > 0 and du + cost_[i] < pot[to_[i]]:
                    pot[to_[i]] = du + cost_[i]

        while pushed < total:
            for u in range(big_n):
                dist[u] = INF
                parent[u] = -1
            dist[ss] = 0
            heap_d[0] = 0
            heap_v[0] = ss
            heap_size = 1
            while heap_size > 0:
                d = heap_d[0]
                u = heap_v[0]
                heap_size -= 1
                heap_d[0] = heap_d[heap_size]
                heap_v[0] = heap_v[heap_size]
                i = 0
                while True:
                    child = 2 * i + 1
                    if child >= heap_size:
                        break
                    if child + 1 < heap_size and _heap_less(
                        heap_d[child + 1], heap_v[child + 1], heap_d[child], heap_v[child]
                    ):
                        child += 1
                    if _heap_less(heap_d[child], heap_v[child], heap_d[i], heap_v[i]):
                        hd = heap_d[i]; hv = heap_v[i]
                        heap_d[i] = heap_d[child]; heap_v[i] = heap_v[child]
                        heap_d[child] = hd; heap_v[child] = hv
                        i = child
                    else:
                        break
                if d > dist[u]:
                    continue
                if u == tt:
                    break
                du = pot[u]
                for a in range(adj_start[u], adj_start[u + 1]):
                    i = adj[a]
                    if cap_[i] <= 0:
                        continue
                    v = to_[i]
                    if pot[v] >= INF:
                        continue
                    nd = d + cost_[i] + du - pot[v]
                    if nd < dist[v]:
                        dist[v] = nd
                        parent[v] = <int>i
                        heap_d[heap_size] = nd
                        heap_v[heap_size] = v
                        i = heap_size
                        heap_size += 1
                        while i > 0:
                            parent_i = (i - 1) // 2
                            if _heap_less(heap_d[i], heap_v[i],
                                          heap_d[parent_i], heap_v[parent_i]):
                                hd = heap_d[i]; hv = heap_v[i]
                                heap_d[i] = heap_d[parent_i]; heap_v[i] = heap_v[parent_i]
                                heap_d[parent_i] = hd; heap_v[parent_i] = hv
                                i = parent_i
                            else:
                                break
            dtt = dist[tt]
            if dtt >= INF:
                break
            for u in range(big_n):
                if pot[u] < INF:
                    pot[u] += dist[u] if dist[u] < dtt else dtt
            bottleneck = INF
            u = tt
            while u != ss:
                a = parent[u]
                if cap_[a] < bottleneck:
                    bottleneck = cap_[a]
                u = to_[a ^ 1]
            u = tt
            while u != ss:
                a = parent[u]
                cap_[a] -= bottleneck
                cap_[a ^ 1] += bottleneck
                u = to_[a ^ 1]
            pushed += bottleneck

        flows = [orig_cap[k] - cap_[2 * k] for k in range(n_arcs)]
        return flows, pushed, total
    finally:
        free(to_); free(cap_); free(cost_); free(orig_cap)
        free(deg); free(adj_start); free(adj); free(fill)
        free(pot); free(dist); free(parent); free(heap_d); free(heap_v)

"""Hot loops compiled with numba.

All kernels take flat numpy arrays, run single-threaded per call and are
deterministic; trial-level parallelism happens above them.
"""

import numpy as np
from numba import njit


@njit(cache=True, nogil=True)
def find_root(parent, x):
    r = x
    while parent[r] != r:
        r = parent[r]
    while parent[x] != r:
        nxt = parent[x]
        parent[x] = r
        x = nxt
    return r


@njit(cache=True, nogil=True)
def union_components(edge_u, edge_v, open_mask, n):
    """Union-find over open edges; returns the flattened root array."""
    parent = np.arange(n, dtype=np.int64)
    for e in range(edge_u.shape[0]):
        if not open_mask[e]:
            continue
        ru = find_root(parent, edge_u[e])
        rv = find_root(parent, edge_v[e])
        if ru != rv:
            if ru < rv:
                parent[rv] = ru
            else:
                parent[ru] = rv
    for v in range(n):
        parent[v] = find_root(parent, v)
    return parent


@njit(cache=True, nogil=True)
def kruskal_forest(order, edge_u, edge_v, n):
    """Kruskal over edges in the given order; returns the keep mask."""
    parent = np.arange(n, dtype=np.int64)
    keep = np.zeros(order.shape[0], dtype=np.bool_)
    kept = 0
    for oi in range(order.shape[0]):
        e = order[oi]
        ru = find_root(parent, edge_u[e])
        rv = find_root(parent, edge_v[e])
        if ru != rv:
            parent[ru] = rv
            keep[e] = True
            kept += 1
            if kept == n - 1:
                break
    return keep


@njit(cache=True, nogil=True)
def minimax_connect(order, edge_u, edge_v, n, a, b):
    """Insert edges in order until a and b connect; returns that edge index, or -1."""
    parent = np.arange(n, dtype=np.int64)
    for oi in range(order.shape[0]):
        e = order[oi]
        ru = find_root(parent, edge_u[e])
        rv = find_root(parent, edge_v[e])
        if ru != rv:
            parent[ru] = rv
            if find_root(parent, a) == find_root(parent, b):
                return e
    return -1


@njit(cache=True, nogil=True)
def invasion(edge_u, edge_v, labels, adj_idx, adj_off, word_length, radius):
    """Invasion percolation from vertex 0 until the invaded set touches radius.

    Repeatedly accepts the minimum-label edge with exactly one invaded
    endpoint (binary-heap keyed by (label, edge index)).  Returns the array
    of accepted labels in acceptance order; empty if the origin is already
    on the boundary.
    """
    n = word_length.shape[0]
    invaded = np.zeros(n, dtype=np.bool_)
    invaded[0] = True
    cap = 64
    heap_lab = np.empty(cap, dtype=np.float64)
    heap_e = np.empty(cap, dtype=np.int64)
    m = 0

    def _grow(heap_lab, heap_e):
        new_lab = np.empty(heap_lab.shape[0] * 2, dtype=np.float64)
        new_e = np.empty(heap_e.shape[0] * 2, dtype=np.int64)
        new_lab[:heap_lab.shape[0]] = heap_lab
        new_e[:heap_e.shape[0]] = heap_e
        return new_lab, new_e

    # push helper inlined: sift-up then sift-down arrays
    for j in range(adj_off[0], adj_off[1]):
        e = adj_idx[j]
        if m == heap_lab.shape[0]:
            heap_lab, heap_e = _grow(heap_lab, heap_e)
        heap_lab[m] = labels[e]
        heap_e[m] = e
        i = m
        m += 1
        while i > 0:
            p = (i - 1) // 2
            if (heap_lab[p] > heap_lab[i]) or (heap_lab[p] == heap_lab[i] and heap_e[p] > heap_e[i]):
                heap_lab[p], heap_lab[i] = heap_lab[i], heap_lab[p]
                heap_e[p], heap_e[i] = heap_e[i], heap_e[p]
                i = p
            else:
                break

    accepted = np.empty(n, dtype=np.float64)
    n_acc = 0
    reached = False
    while m > 0:
        lab = heap_lab[0]
        e = heap_e[0]
        m -= 1
        heap_lab[0] = heap_lab[m]
        heap_e[0] = heap_e[m]
        i = 0
        while True:
            l, r = 2 * i + 1, 2 * i + 2
            s = i
            if l < m and ((heap_lab[l] < heap_lab[s]) or (heap_lab[l] == heap_lab[s] and heap_e[l] < heap_e[s])):
                s = l
            if r < m and ((heap_lab[r] < heap_lab[s]) or (heap_lab[r] == heap_lab[s] and heap_e[r] < heap_e[s])):
                s = r
            if s == i:
                break
            heap_lab[s], heap_lab[i] = heap_lab[i], heap_lab[s]
            heap_e[s], heap_e[i] = heap_e[i], heap_e[s]
            i = s

        u, v = edge_u[e], edge_v[e]
        if invaded[u] and invaded[v]:
            continue
        w = v if invaded[u] else u
        invaded[w] = True
        accepted[n_acc] = lab
        n_acc += 1
        if word_length[w] == radius:
            reached = True
            break
        for j in range(adj_off[w], adj_off[w + 1]):
            e2 = adj_idx[j]
            if invaded[edge_u[e2]] and invaded[edge_v[e2]]:
                continue
            if m == heap_lab.shape[0]:
                heap_lab, heap_e = _grow(heap_lab, heap_e)
            heap_lab[m] = labels[e2]
            heap_e[m] = e2
            i = m
            m += 1
            while i > 0:
                p = (i - 1) // 2
                if (heap_lab[p] > heap_lab[i]) or (heap_lab[p] == heap_lab[i] and heap_e[p] > heap_e[i]):
                    heap_lab[p], heap_lab[i] = heap_lab[i], heap_lab[p]
                    heap_e[p], heap_e[i] = heap_e[i], heap_e[p]
                    i = p
                else:
                    break
    return accepted[:n_acc], reached

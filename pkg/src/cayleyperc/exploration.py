"""Cluster exploration along a fixed edge ordering.

This reproduces the inductive procedure from the proof of the
edge-isoperimetric upper bound on p_c: edges are examined one at a time,
always the least-indexed unexamined edge with exactly one endpoint in the
current vertex set, and each examined edge contributes one {0,1} bit.  The
bits are i.i.d. Bernoulli(p) because every examined edge is fresh.  After
the cluster is exhausted the sequence keeps reading fresh edges beyond the
largest index used, so in principle it never stops; on a finite ball it is
truncated when the edges run out.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass

import numpy as np

from .percolation import Configuration


@dataclass(frozen=True)
class ExplorationTrace:
    bits: np.ndarray            # X_1, X_2, ... (uint8)
    stop: int | None            # stopping index n(omega); None = cluster left the ball
    cluster_size_at_stop: int
    truncated: bool             # sequence cut short by ball exhaustion
    examined_edges: np.ndarray  # edge index per cluster-phase step


def exploration_sequence(config: Configuration, v: int = 0) -> ExplorationTrace:
    """Explore C(omega; v); the edge ordering is the global edge index rotated
    so that the first edge is incident to v.

    The candidate set (unexamined edges with exactly one endpoint in the
    vertex set) is kept in a heap keyed by position in the ordering, which
    selects exactly the least-indexed candidate at every step.
    """
    ball = config.ball
    E = ball.n_edges
    adj = ball.adjacency()
    if not adj[v]:
        raise ValueError(f"vertex {v} has no incident edges")
    first = adj[v][0]
    # pos[e] = position of edge e in the rotated ordering
    pos = np.empty(E, dtype=np.int64)
    pos[first:] = np.arange(E - first)
    pos[:first] = np.arange(E - first, E)

    open_edge = config.open
    in_V = np.zeros(ball.n_vertices, dtype=bool)
    in_V[v] = True
    examined = np.zeros(E, dtype=bool)

    heap = [(int(pos[e]), e) for e in adj[v]]
    heapq.heapify(heap)

    bits = []
    edges_used = []
    cluster_size = 1
    max_pos = -1

    while heap:
        p_e, e = heapq.heappop(heap)
        if examined[e]:
            continue
        u, w = int(ball.edge_u[e]), int(ball.edge_v[e])
        if in_V[u] == in_V[w]:
            continue        # both endpoints joined since the push: dead edge
        examined[e] = True
        max_pos = max(max_pos, p_e)
        bit = bool(open_edge[e])
        bits.append(1 if bit else 0)
        edges_used.append(e)
        if bit:
            newv = w if in_V[u] else u
            in_V[newv] = True
            cluster_size += 1
            for e2 in adj[newv]:
                if not examined[e2]:
                    a, b = int(ball.edge_u[e2]), int(ball.edge_v[e2])
                    if in_V[a] != in_V[b]:
                        heapq.heappush(heap, (int(pos[e2]), e2))

    n_stop = len(bits)

    # the cluster filled its ball-visible extent; if it touches the boundary
    # the genuine (infinite-graph) procedure would not have stopped here
    touches = bool(in_V[ball.boundary].any()) if ball.radius > 0 else True
    stop = None if touches else n_stop

    # rule (a): keep reading fresh edges past the largest position used
    inv_order = np.argsort(pos, kind="stable")   # position -> edge
    for p_i in range(max_pos + 1, E):
        e = int(inv_order[p_i])
        bits.append(1 if open_edge[e] else 0)

    return ExplorationTrace(
        bits=np.array(bits, dtype=np.uint8),
        stop=stop,
        cluster_size_at_stop=cluster_size,
        truncated=True,
        examined_edges=np.array(edges_used, dtype=np.int64),
    )


def pooled_bits(configs, v: int = 0, limit: int | None = None) -> np.ndarray:
    """Concatenate exploration bits across configurations (for i.i.d. checks)."""
    out = []
    total = 0
    for cfg in configs:
        tr = exploration_sequence(cfg, v)
        out.append(tr.bits)
        total += len(tr.bits)
        if limit is not None and total >= limit:
            break
    bits = np.concatenate(out)
    return bits[:limit] if limit is not None else bits

"""Simple-cycle censuses through the origin and the gamma growth estimate.

Convention: cycles are unoriented, unrooted edge sets containing the origin
as a vertex; each geometric cycle is counted exactly once.  (A directed
traversal rooted anywhere would multiply counts by 2n; both the convention
and its effect on finite-n growth estimates are documented in the README.)
"""

from __future__ import annotations

import sys
from dataclasses import dataclass, field

from .balls import CayleyBall
from .errors import CapExceededError

DEFAULT_CYCLE_CAP = 50_000_000


@dataclass(frozen=True)
class CycleCensus:
    counts: dict                # n -> number of simple cycles of length n through origin
    n_max: int
    gamma_points: dict = field(default_factory=dict)   # n -> counts[n]^(1/n)

    def total(self) -> int:
        return sum(self.counts.values())


def count_simple_cycles(ball: CayleyBall, n_max: int,
                        cycle_cap: int = DEFAULT_CYCLE_CAP) -> CycleCensus:
    """DFS over self-avoiding paths from the origin, closing back at the origin.

    Each unoriented cycle is found twice (once per direction); counting only
    traversals whose first vertex is smaller than their last vertex keeps
    exactly one representative.  Distance pruning: a path at vertex v with
    budget b can only close if word_length(v) <= b.
    """
    if n_max < 3:
        return CycleCensus(counts={}, n_max=n_max)
    if ball.radius < (n_max + 1) // 2:
        raise ValueError(
            f"ball radius {ball.radius} too small for cycles of length {n_max} "
            f"(need >= {(n_max + 1) // 2})")
    if ball.mode != "geometric":
        raise ValueError("cycle census needs a geometric ball")

    nbr = ball.neighbor_lists()
    wl = ball.word_length
    counts = {}
    total = 0
    visited = [False] * ball.n_vertices
    visited[0] = True
    sys.setrecursionlimit(max(sys.getrecursionlimit(), n_max + 100))

    def dfs(v, first, length):
        nonlocal total
        for w in nbr[v]:
            if w == 0:
                if length >= 2 and first < v:
                    counts[length + 1] = counts.get(length + 1, 0) + 1
                    total += 1
                    if total > cycle_cap:
                        raise CapExceededError(f"cycle count exceeds cap {cycle_cap}")
                continue
            if not visited[w] and length + 1 + wl[w] <= n_max:
                visited[w] = True
                dfs(w, first, length + 1)
                visited[w] = False

    for first in nbr[0]:
        visited[first] = True
        dfs(first, first, 1)
        visited[first] = False

    gamma_points = {n: c ** (1.0 / n) for n, c in sorted(counts.items())}
    return CycleCensus(counts=dict(sorted(counts.items())), n_max=n_max,
                       gamma_points=gamma_points)


def gamma_estimate(census: CycleCensus):
    """(gamma_hat, points): gamma_hat = max_n counts[n]^(1/n), zero for trees.

    A finite census neither upper- nor lower-bounds the limsup; the value is
    an uncertified estimate and callers must treat it as such.
    """
    if census.n_max < 3:
        raise ValueError("census is empty (n_max < 3)")
    if not census.counts:
        return 0.0, {}
    return max(census.gamma_points.values()), dict(census.gamma_points)

"""Finite radius-r balls of Cayley graphs, enumerated breadth-first.

Two edge modes:

* ``geometric`` -- simple graph: one edge per unordered vertex pair, loops
  dropped.  This is the universe for percolation, forests, cycle counting
  and isoperimetry.
* ``family``    -- one edge record per (vertex, generator slot) whose image
  stays inside the ball, i.e. the finite shadow of the edge set
  V x {1..d}.  Parallel edges and loops are retained with family
  multiplicity; the degree of an interior vertex is the number of its
  generator applications, which is exactly d.

Vertex order is (word_length, element_key), so vertex and edge indices are
deterministic across runs and platforms.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import CapExceededError, EncodingCollisionError
from .presentations import GroupPresentation

DEFAULT_BALL_CAP = 5_000_000


@dataclass(frozen=True)
class CayleyBall:
    pres: GroupPresentation
    radius: int
    mode: str
    vertices: list                  # index -> element, origin at index 0
    word_length: np.ndarray         # per-vertex distance from origin
    edge_u: np.ndarray              # int64, u <= v in geometric mode
    edge_v: np.ndarray
    edge_gen: np.ndarray            # generator slot that produced the edge
    _adj: dict = field(default=None, repr=False, compare=False)

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    @property
    def n_edges(self) -> int:
        return len(self.edge_u)

    @property
    def boundary(self) -> np.ndarray:
        """Indices at distance exactly r."""
        return np.flatnonzero(self.word_length == self.radius)

    @property
    def interior(self) -> np.ndarray:
        """Indices at distance <= r-1."""
        return np.flatnonzero(self.word_length < self.radius)

    @property
    def geometric_degree(self) -> int:
        """Degree of every vertex of the infinite geometric graph."""
        return self.pres.geometric_degree

    def sphere_sizes(self) -> np.ndarray:
        return np.bincount(self.word_length, minlength=self.radius + 1)

    def degrees(self) -> np.ndarray:
        """In-ball degree per vertex (family mode: generator applications)."""
        if self.mode == "family":
            deg = np.bincount(self.edge_u, minlength=self.n_vertices)
        else:
            deg = np.bincount(self.edge_u, minlength=self.n_vertices)
            deg += np.bincount(self.edge_v, minlength=self.n_vertices)
        return deg

    def outward_counts(self) -> np.ndarray:
        """Per-vertex number of geometric edges leaving the ball.

        Zero on interior vertices; used to wire the boundary to a contracted
        outside vertex.  Geometric mode only.
        """
        if self.mode != "geometric":
            raise ValueError("outward_counts is defined for geometric balls")
        deg = self.degrees()
        out = np.zeros(self.n_vertices, dtype=np.int64)
        b = self.boundary
        out[b] = self.geometric_degree - deg[b]
        return out

    def adjacency(self) -> list:
        """Edge-index adjacency lists, each sorted ascending."""
        adj = [[] for _ in range(self.n_vertices)]
        for e in range(self.n_edges):
            adj[self.edge_u[e]].append(e)
            if self.edge_v[e] != self.edge_u[e]:
                adj[self.edge_v[e]].append(e)
        return adj

    def neighbor_lists(self) -> list:
        """Vertex adjacency lists (geometric), each sorted ascending."""
        nbr = [[] for _ in range(self.n_vertices)]
        for e in range(self.n_edges):
            u, v = int(self.edge_u[e]), int(self.edge_v[e])
            nbr[u].append(v)
            nbr[v].append(u)
        for lst in nbr:
            lst.sort()
        return nbr

    def other_end(self, e: int, v: int) -> int:
        u = self.edge_u[e]
        return int(self.edge_v[e]) if u == v else int(u)


def enumerate_ball(pres: GroupPresentation, r: int, mode: str = "geometric",
                   ball_cap: int = DEFAULT_BALL_CAP) -> CayleyBall:
    """BFS enumeration of the radius-r ball around the identity.

    Vertices are sorted by (word_length, element_key); the element-key table
    raises EncodingCollisionError if two distinct elements ever share a key.
    """
    if r < 0:
        raise ValueError(f"radius must be >= 0, got {r}")
    if mode not in ("geometric", "family"):
        raise ValueError(f"mode must be geometric|family, got {mode!r}")
    pres.validate()

    key = pres.element_key
    origin = pres.identity
    elements = {key(origin): origin}
    vertices = [origin]
    word_length = [0]
    frontier = [origin]
    for dist in range(1, r + 1):
        new_keys = {}
        for g in frontier:
            for s in pres.generators:
                h = pres.mul(g, s)
                hk = key(h)
                hit = elements.get(hk, new_keys.get(hk))
                if hit is not None:
                    if hit != h:
                        raise EncodingCollisionError(
                            f"element_key collision: {hit!r} vs {h!r}")
                    continue
                new_keys[hk] = h
        frontier = []
        for hk in sorted(new_keys):
            h = new_keys[hk]
            elements[hk] = h
            vertices.append(h)
            word_length.append(dist)
            frontier.append(h)
            if len(vertices) > ball_cap:
                raise CapExceededError(
                    f"ball size exceeds cap {ball_cap} at radius {dist}")
        if not frontier:
            break

    index = {key(el): i for i, el in enumerate(vertices)}

    eu, ev, eg = [], [], []
    if mode == "family":
        for i, g in enumerate(vertices):
            for slot, s in enumerate(pres.generators):
                j = index.get(key(pres.mul(g, s)))
                if j is not None:
                    eu.append(i)
                    ev.append(j)
                    eg.append(slot)
    else:
        seen = set()
        for i, g in enumerate(vertices):
            for slot, s in enumerate(pres.generators):
                j = index.get(key(pres.mul(g, s)))
                if j is None or j == i:
                    continue
                pair = (i, j) if i < j else (j, i)
                if pair in seen:
                    continue
                seen.add(pair)
                eu.append(pair[0])
                ev.append(pair[1])
                eg.append(slot)
        order = np.lexsort((np.asarray(eg), np.asarray(ev), np.asarray(eu)))
        eu = list(np.asarray(eu)[order])
        ev = list(np.asarray(ev)[order])
        eg = list(np.asarray(eg)[order])

    return CayleyBall(
        pres=pres, radius=r, mode=mode,
        vertices=vertices,
        word_length=np.asarray(word_length, dtype=np.int64),
        edge_u=np.asarray(eu, dtype=np.int64),
        edge_v=np.asarray(ev, dtype=np.int64),
        edge_gen=np.asarray(eg, dtype=np.int64),
    )

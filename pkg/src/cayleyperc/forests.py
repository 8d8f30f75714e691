"""Free and wired minimal spanning forests on finite balls.

The free forest is Kruskal on the ball's edges.  The wired forest is
Kruskal on the ball *plus one contracted outside vertex*: every boundary
vertex contributes its missing geometric edges (the ones leaving the ball)
as extra edges to that vertex, labeled by the tail of the same labeling.
Cycles through the contracted vertex are the finite shadow of bi-infinite
cycles, which is what distinguishes the wired from the free construction.

Ties between equal labels are broken by edge index, and every minimax
computation here uses the same (label, index) key, so the per-edge
criteria  e in FMSF <=> x(e) <= f(x, e)  hold exactly, not just almost
surely.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .balls import CayleyBall
from .percolation import EdgeLabeling, sample_labels
from .runpool import map_trials

INF = float("inf")


@dataclass(frozen=True)
class Forest:
    ball: CayleyBall
    boundary_condition: str         # free | wired
    edges: np.ndarray               # bool per ball edge (internal edges kept)
    wired_attachments: np.ndarray   # kept outward-slot indices (wired only)

    @property
    def n_edges(self) -> int:
        return int(self.edges.sum())

    def edges_hex(self) -> str:
        return hex(int.from_bytes(np.packbits(self.edges, bitorder="little").tobytes(),
                                  "little"))

    def root_degree(self, v: int = 0) -> int:
        at_v = (self.ball.edge_u == v) | (self.ball.edge_v == v)
        return int(np.count_nonzero(self.edges & at_v))


def _wired_arrays(ball: CayleyBall):
    """Edge arrays of ball + contracted outside vertex (index n)."""
    out_cnt = ball.outward_counts()
    owners = np.repeat(np.arange(ball.n_vertices), out_cnt)
    n = ball.n_vertices
    eu = np.concatenate([ball.edge_u, owners])
    ev = np.concatenate([ball.edge_v, np.full(len(owners), n, dtype=np.int64)])
    return eu, ev, len(owners)


def msf_free(ball: CayleyBall, labeling: EdgeLabeling) -> Forest:
    """Kruskal ascending by (label, edge index): the minimal spanning forest
    of the ball, which on finite graphs equals the cycle-criterion edge set."""
    order = np.argsort(labeling.ball_labels, kind="stable")
    keep = _kernels.kruskal_forest(order, ball.edge_u, ball.edge_v, ball.n_vertices)
    return Forest(ball=ball, boundary_condition="free", edges=keep,
                  wired_attachments=np.zeros(0, dtype=np.int64))


def msf_wired(ball: CayleyBall, labeling: EdgeLabeling) -> Forest:
    """Kruskal on the boundary-contracted graph.

    Returns the ball edges kept plus the kept attachment slots (indices into
    the outward part of the labeling).
    """
    if ball.radius < 2:
        raise ValueError("wired forest needs radius >= 2")
    eu, ev, n_out = _wired_arrays(ball)
    order = np.argsort(labeling.labels, kind="stable")
    keep = _kernels.kruskal_forest(order, eu, ev, ball.n_vertices + 1)
    return Forest(ball=ball, boundary_condition="wired",
                  edges=keep[:ball.n_edges],
                  wired_attachments=np.flatnonzero(keep[ball.n_edges:]))


def _minimax_without(eu, ev, labels, n, e_drop, a, b):
    """Minimax (label,index) path value between a and b in the graph minus one edge."""
    order = np.argsort(labels, kind="stable")
    order = order[order != e_drop]
    e = _kernels.minimax_connect(order, eu, ev, n, a, b)
    return INF if e < 0 else float(labels[e])


def f_value(ball: CayleyBall, labeling: EdgeLabeling, e: int) -> float:
    """Cycle threshold  f(x, e) = inf over simple cycles through e of the max
    other label; computed as the minimax path value between e's endpoints in
    the ball minus e.  Infinite for bridges."""
    return _minimax_without(ball.edge_u, ball.edge_v, labeling.ball_labels,
                            ball.n_vertices, e, int(ball.edge_u[e]), int(ball.edge_v[e]))


def w_value(ball: CayleyBall, labeling: EdgeLabeling, e: int) -> float:
    """Extended-cycle threshold: f computed in the boundary-contracted graph,
    where paths through the contracted vertex shadow bi-infinite cycles."""
    if ball.radius < 1:
        raise ValueError("wired values need radius >= 1")
    eu, ev, n_out = _wired_arrays(ball)
    return _minimax_without(eu, ev, labeling.labels, ball.n_vertices + 1,
                            e, int(eu[e]), int(ev[e]))


@dataclass(frozen=True)
class ForestStats:
    root_degree: int
    internal_density: float     # kept ball edges per interior vertex
    component_count: int        # components of the kept ball edges
    cost_proxy: float           # root_degree / 2


def forest_stats(forest: Forest) -> ForestStats:
    ball = forest.ball
    root_deg = forest.root_degree(0)
    n_int = len(ball.interior)
    kept = int(forest.edges.sum())
    comp = ball.n_vertices - kept   # forest: components = V - edges
    return ForestStats(root_degree=root_deg,
                       internal_density=kept / n_int if n_int else 0.0,
                       component_count=comp,
                       cost_proxy=root_deg / 2.0)


@dataclass(frozen=True)
class ForestGapReport:
    radius: int
    trials: int
    free_root_degree_mean: float
    wired_root_degree_mean: float
    root_degree_gap: float
    gap_stderr: float
    symdiff_density_mean: float     # origin-incident edges in exactly one forest / deg
    free_cost_proxy: float
    wired_cost_proxy: float
    wired_components_attached: bool  # every wired component reaches the contracted vertex


def fmsf_wmsf_gap(pres, radius: int, trials: int, master_seed: int,
                  ball: CayleyBall | None = None) -> ForestGapReport:
    """Per-trial paired free/wired forests from one labeling; origin statistics.

    The free-vs-wired distinction is measured at the origin (root degree and
    symmetric difference of incident edges): global edge counts are
    boundary-dominated on nonamenable graphs, the origin is not.
    """
    if ball is None:
        from .balls import enumerate_ball
        ball = enumerate_ball(pres, radius, "geometric")
    at_origin = np.flatnonzero((ball.edge_u == 0) | (ball.edge_v == 0))
    deg0 = len(at_origin)

    def one(trial: int):
        lab = sample_labels(ball, master_seed, trial)
        free = msf_free(ball, lab)
        wired = msf_wired(ball, lab)
        fdeg = free.root_degree(0)
        wdeg = wired.root_degree(0)
        sym = int(np.count_nonzero(free.edges[at_origin] != wired.edges[at_origin]))
        # every wired component must reach the contracted vertex: with the
        # outside vertex included the wired forest is a single spanning tree
        total_kept = int(wired.edges.sum()) + len(wired.wired_attachments)
        attached = total_kept == ball.n_vertices
        return fdeg, wdeg, sym / deg0, attached

    rows = map_trials(one, trials)
    fdeg = np.array([r[0] for r in rows], dtype=float)
    wdeg = np.array([r[1] for r in rows], dtype=float)
    sym = np.array([r[2] for r in rows], dtype=float)
    gaps = fdeg - wdeg
    return ForestGapReport(
        radius=ball.radius, trials=trials,
        free_root_degree_mean=float(fdeg.mean()),
        wired_root_degree_mean=float(wdeg.mean()),
        root_degree_gap=float(gaps.mean()),
        gap_stderr=float(gaps.std(ddof=1) / np.sqrt(trials)) if trials > 1 else INF,
        symdiff_density_mean=float(sym.mean()),
        free_cost_proxy=float(fdeg.mean() / 2),
        wired_cost_proxy=float(wdeg.mean() / 2),
        wired_components_attached=bool(all(r[3] for r in rows)),
    )

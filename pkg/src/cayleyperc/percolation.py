"""Standard-coupling sampling, thresholding and cluster analysis on a ball.

The coupling follows the textbook construction: i.i.d. uniform labels
x(e) in [0,1) per edge, and pi_p keeps exactly the edges with x(e) < p, so
one labeling couples every p in [0,1] monotonically.

Labels come from a counter-based Philox stream keyed on
(master_seed, trial); the i-th draw is a pure function of the key and the
counter position i = edge index, hence bit-identical across platforms and
thread schedules.

Edge indices 0..E-1 are the ball's edges; for geometric balls the labeling
is extended by one extra label per *outward* slot of each boundary vertex
(edges of the infinite graph that leave the ball).  Those extra labels are
what the wired spanning-forest construction and the wired minimax values
consume; percolation operations use only the first E entries.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .balls import CayleyBall


@dataclass(frozen=True)
class EdgeLabeling:
    ball: CayleyBall
    labels: np.ndarray          # float64 in [0,1); ball edges then outward slots
    seed: int
    trial: int
    n_ball_edges: int
    duplicate_count: int = 0    # ties resolved by edge-index order; expected 0

    @property
    def ball_labels(self) -> np.ndarray:
        return self.labels[:self.n_ball_edges]

    @property
    def outward_labels(self) -> np.ndarray:
        return self.labels[self.n_ball_edges:]


@dataclass(frozen=True)
class Configuration:
    ball: CayleyBall
    p: float
    open: np.ndarray            # bool per ball edge

    def open_hex(self) -> str:
        """Bitset as a hex string (edge 0 = least significant bit)."""
        return hex(int.from_bytes(np.packbits(self.open, bitorder="little").tobytes(),
                                  "little"))


@dataclass(frozen=True)
class ClusterPartition:
    root: np.ndarray            # vertex -> representative (a fixed point)
    cluster_size: dict          # representative -> count
    touches_boundary: dict      # representative -> bool


def sample_labels(ball: CayleyBall, master_seed: int, trial: int) -> EdgeLabeling:
    """Uniform [0,1) labels for ball edges plus outward boundary slots."""
    n_out = int(ball.outward_counts().sum()) if ball.mode == "geometric" else 0
    n = ball.n_edges + n_out
    gen = np.random.Generator(np.random.Philox(key=[master_seed & (2**64 - 1), trial]))
    labels = gen.random(n)
    dup = n - len(np.unique(labels))
    return EdgeLabeling(ball=ball, labels=labels, seed=master_seed, trial=trial,
                        n_ball_edges=ball.n_edges, duplicate_count=int(dup))


def threshold(labeling: EdgeLabeling, p: float) -> Configuration:
    """pi_p: keep exactly the edges with label < p."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must be in [0, 1], got {p}")
    return Configuration(ball=labeling.ball, p=p,
                         open=labeling.ball_labels < p)


def find_clusters(config: Configuration) -> ClusterPartition:
    """Connected components of the open subgraph (union-find)."""
    ball = config.ball
    root = _kernels.union_components(ball.edge_u, ball.edge_v,
                                     config.open, ball.n_vertices)
    reps, counts = np.unique(root, return_counts=True)
    sizes = dict(zip(reps.tolist(), counts.tolist()))
    touches = dict.fromkeys(sizes, False)
    for r in np.unique(root[ball.boundary]).tolist():
        touches[r] = True
    return ClusterPartition(root=root, cluster_size=sizes, touches_boundary=touches)


@dataclass(frozen=True)
class ClusterCensus:
    """Counts of boundary-touching clusters above a size floor.

    This is a heuristic finite-volume proxy for the number of infinite
    clusters N_p; it is a diagnostic, not an estimator with a convergence
    guarantee.
    """

    p: float
    size_floor: int
    qualifying: int
    largest: int
    second_largest: int
    note: str = field(default="heuristic proxy for N_p (finite-volume diagnostic)")


def cluster_census(config: Configuration, size_floor: int) -> ClusterCensus:
    part = find_clusters(config)
    qual = sum(1 for r, s in part.cluster_size.items()
               if s >= size_floor and part.touches_boundary[r])
    sizes = sorted(part.cluster_size.values(), reverse=True)
    return ClusterCensus(p=config.p, size_floor=size_floor, qualifying=qual,
                         largest=sizes[0] if sizes else 0,
                         second_largest=sizes[1] if len(sizes) > 1 else 0)


def coupled_containment(labeling: EdgeLabeling, p1: float, p2: float,
                        size_floor: int) -> float:
    """Fraction of qualifying p2-clusters containing a qualifying p1-cluster.

    Both configurations come from the same labeling (monotone coupling), the
    finite shadow of simultaneous birth.  Returns 1.0 when there is no
    qualifying p2-cluster (nothing to violate).  Diagnostic only.
    """
    if p1 > p2:
        raise ValueError(f"need p1 <= p2, got {p1} > {p2}")
    part1 = find_clusters(threshold(labeling, p1))
    part2 = find_clusters(threshold(labeling, p2))

    def qualifying(part):
        return {r for r, s in part.cluster_size.items()
                if s >= size_floor and part.touches_boundary[r]}

    q1, q2 = qualifying(part1), qualifying(part2)
    if not q2:
        return 1.0
    covered = {int(part2.root[r]) for r in q1}
    return len(q2 & covered) / len(q2)


def percolate_sweep(ball: CayleyBall, p_values, trials: int, master_seed: int,
                    size_floor: int):
    """Census statistics per (p, trial) plus per-p means.

    Returns (rows, summary): rows are dicts per trial, summary maps p to
    mean largest-cluster density, mean qualifying count and the census note.
    """
    from .runpool import map_trials
    p_values = sorted(p_values)
    n = ball.n_vertices

    def one(trial):
        lab = sample_labels(ball, master_seed, trial)
        out = []
        for p in p_values:
            cen = cluster_census(threshold(lab, p), size_floor)
            out.append(cen)
        return out

    per_trial = map_trials(one, trials)
    rows = []
    for trial, censuses in enumerate(per_trial):
        for cen in censuses:
            rows.append({
                "p": cen.p, "trial": trial, "qualifying": cen.qualifying,
                "largest": cen.largest, "second_largest": cen.second_largest,
                "largest_density": cen.largest / n,
            })
    summary = {}
    for i, p in enumerate(p_values):
        dens = np.array([c[i].largest / n for c in per_trial])
        qual = np.array([c[i].qualifying for c in per_trial], dtype=float)
        summary[p] = {
            "largest_density_mean": float(dens.mean()),
            "largest_density_stderr": float(dens.std(ddof=1) / np.sqrt(trials))
            if trials > 1 else 0.0,
            "qualifying_mean": float(qual.mean()),
            "note": ClusterCensus.__dataclass_fields__["note"].default,
        }
    return rows, summary


def graphing_cost(pres, radius: int, p: float, trials: int, master_seed: int):
    """Empirical cost of the cluster graphing: mean open generator edges at the origin.

    One partial-isomorphism map per geometric generator pair {s, s^-1}; the
    trial value is the number of those origin edges open at level p.
    """
    from .balls import enumerate_ball
    ball = enumerate_ball(pres, max(radius, 1), "geometric")
    key = pres.element_key
    index = {key(el): i for i, el in enumerate(ball.vertices)}
    targets = []
    for s in pres.generator_pairs:
        targets.append(index[key(s)])
    edge_of = {}
    for e in range(ball.n_edges):
        u, v = int(ball.edge_u[e]), int(ball.edge_v[e])
        if u == 0:
            edge_of[v] = e
        elif v == 0:
            edge_of[u] = e
    edge_ids = np.array([edge_of[t] for t in targets], dtype=np.int64)
    vals = np.empty(trials)
    for t in range(trials):
        lab = sample_labels(ball, master_seed, t)
        vals[t] = int((lab.ball_labels[edge_ids] < p).sum())
    stderr = vals.std(ddof=1) / np.sqrt(trials) if trials > 1 else 0.0
    return float(vals.mean()), float(stderr)

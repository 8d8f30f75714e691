"""Critical-threshold estimators.

invasion
    Grow the invaded set from the origin, always accepting the
    minimum-label edge with exactly one invaded endpoint, until the set
    touches the ball boundary.  The trial statistic is the maximum label
    accepted after the invaded set first exceeds half its final size (the
    early transient is discarded).  Works on any ball.

crossing
    Square-lattice boxes only.  Per trial, ascending union-find insertion
    yields the critical label at which a left-right open crossing first
    appears; bisection on the empirical crossing frequency then locates the
    p with crossing probability 1/2 (the sample median of those critical
    labels).

relative p_c
    Sample pi_p(x), then estimate p_c *of the open subgraph*: restricted to
    open edges, the rescaled labels x(e)/p are again i.i.d. uniform on
    [0,1), so the same estimators apply verbatim inside the environment.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .balls import CayleyBall
from .percolation import sample_labels
from .runpool import map_trials


@dataclass(frozen=True)
class PcEstimate:
    pc_hat: float
    stderr: float
    method: str
    trials: int
    per_trial: np.ndarray
    failures: int = 0


def _edge_csr(edge_u: np.ndarray, edge_v: np.ndarray, n: int):
    """CSR edge-incidence lists: (idx, off) with edges of v at idx[off[v]:off[v+1]]."""
    deg = np.bincount(edge_u, minlength=n) + np.bincount(edge_v, minlength=n)
    off = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(deg, out=off[1:])
    eids = np.arange(len(edge_u), dtype=np.int64)
    both = np.concatenate([edge_u, edge_v])
    order = np.argsort(both, kind="stable")
    idx = np.concatenate([eids, eids])[order]
    return idx, off


def _invasion_statistic(accepted: np.ndarray):
    """Max accepted label once the invaded set exceeds half its final size."""
    if accepted.size == 0:
        return np.nan
    m = accepted.size + 1                       # final invaded vertex count
    sizes = np.arange(2, m + 1)                 # invaded size after each acceptance
    late = accepted[sizes > m / 2]
    return float(late.max())


def estimate_pc_invasion(ball: CayleyBall, trials: int, master_seed: int,
                         open_at: float | None = None) -> PcEstimate:
    """Invasion estimator on any geometric ball.

    With ``open_at=p`` the invasion runs inside the open subgraph pi_p(x) on
    rescaled labels (the relative-p_c mode); trials whose origin cluster
    fails to reach the boundary are discarded and counted as failures.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if ball.radius < 8:
        raise ValueError(f"radius {ball.radius} too small for invasion (need >= 8)")
    adj_idx, adj_off = _edge_csr(ball.edge_u, ball.edge_v, ball.n_vertices)

    def one(trial: int):
        labels = sample_labels(ball, master_seed, trial).ball_labels
        if open_at is None:
            acc, reached = _kernels.invasion(ball.edge_u, ball.edge_v, labels,
                                             adj_idx, adj_off, ball.word_length,
                                             ball.radius)
        else:
            keep = labels < open_at
            if not keep.any():
                return np.nan
            sub_u = ball.edge_u[keep]
            sub_v = ball.edge_v[keep]
            sub_lab = labels[keep] / open_at
            idx, off = _edge_csr(sub_u, sub_v, ball.n_vertices)
            acc, reached = _kernels.invasion(sub_u, sub_v, sub_lab, idx, off,
                                             ball.word_length, ball.radius)
        if not reached:
            return np.nan
        return _invasion_statistic(acc)

    stats = np.array(map_trials(one, trials))
    ok = stats[~np.isnan(stats)]
    failures = trials - ok.size
    if ok.size == 0:
        raise RuntimeError("all invasion trials failed to reach the boundary")
    stderr = ok.std(ddof=1) / np.sqrt(ok.size) if ok.size > 1 else np.inf
    return PcEstimate(pc_hat=float(ok.mean()), stderr=float(stderr),
                      method="invasion", trials=trials, per_trial=stats,
                      failures=failures)


# ---------------------------------------------------------------------------
# crossing estimator (Z^2 box geometry)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BoxGraph:
    """L x L square-lattice box with virtual left/right terminal nodes."""
    L: int
    edge_u: np.ndarray
    edge_v: np.ndarray
    n: int          # L*L real vertices; terminals are n and n+1

    @property
    def n_edges(self):
        return len(self.edge_u)


def box_graph(L: int) -> BoxGraph:
    if L < 8:
        raise ValueError(f"box side {L} too small (need >= 8)")
    eu, ev = [], []
    for x in range(L):
        for y in range(L):
            v = x * L + y
            if x + 1 < L:
                eu.append(v)
                ev.append(v + L)
            if y + 1 < L:
                eu.append(v)
                ev.append(v + 1)
    return BoxGraph(L=L, edge_u=np.array(eu, dtype=np.int64),
                    edge_v=np.array(ev, dtype=np.int64), n=L * L)


def _box_labels(box: BoxGraph, master_seed: int, trial: int) -> np.ndarray:
    gen = np.random.Generator(np.random.Philox(key=[master_seed & (2**64 - 1), trial]))
    return gen.random(box.n_edges)


def _crossing_label(box: BoxGraph, labels: np.ndarray, mask=None) -> float:
    """Label at which a left-right crossing first appears; nan if never."""
    L, n = box.L, box.n
    left, right = n, n + 1
    if mask is None:
        eu, ev, lab = box.edge_u, box.edge_v, labels
    else:
        eu, ev, lab = box.edge_u[mask], box.edge_v[mask], labels[mask]
    # terminal hookups carry label -1 so they are united first
    term_u = np.concatenate([np.full(L, left), np.full(L, right)])
    term_v = np.concatenate([np.arange(L), (L - 1) * L + np.arange(L)])
    eu2 = np.concatenate([eu, term_u])
    ev2 = np.concatenate([ev, term_v])
    lab2 = np.concatenate([lab, np.full(2 * L, -1.0)])
    order = np.argsort(lab2, kind="stable")
    e = _kernels.minimax_connect(order, eu2, ev2, n + 2, left, right)
    if e < 0:
        return np.nan
    return float(lab2[e])


def _bisect_frequency(samples: np.ndarray, target: float = 0.5, iters: int = 50) -> float:
    """Bisection on p for empirical frequency(sample < p) = target."""
    lo, hi = 0.0, 1.0
    for _ in range(iters):
        mid = (lo + hi) / 2
        if (samples < mid).mean() < target:
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2


def estimate_pc_crossing(L: int, trials: int, master_seed: int,
                         open_at: float | None = None) -> PcEstimate:
    """Crossing-probability-1/2 estimator on an L x L box (Z^2 only)."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    box = box_graph(L)

    def one(trial: int):
        labels = _box_labels(box, master_seed, trial)
        if open_at is None:
            return _crossing_label(box, labels)
        mask = labels < open_at
        val = _crossing_label(box, labels / open_at, mask=mask)
        return val

    stats = np.array(map_trials(one, trials))
    ok = stats[~np.isnan(stats)]
    failures = trials - ok.size
    if ok.size == 0:
        raise RuntimeError("no trial produced a crossing")
    pc = _bisect_frequency(ok)
    # normal-approximation stderr of a sample median
    stderr = 1.2533 * ok.std(ddof=1) / np.sqrt(ok.size) if ok.size > 1 else np.inf
    return PcEstimate(pc_hat=float(pc), stderr=float(stderr), method="crossing",
                      trials=trials, per_trial=stats, failures=failures)


def estimate_pc(pres=None, radius=None, trials=100, master_seed=0,
                method="invasion", ball: CayleyBall | None = None, L=None) -> PcEstimate:
    """Dispatch: invasion on a ball of ``pres`` (or a prebuilt ball), or crossing on a box."""
    if method == "crossing":
        return estimate_pc_crossing(L or (2 * (radius or 32)), trials, master_seed)
    if method != "invasion":
        raise ValueError(f"unknown method {method!r}")
    if ball is None:
        from .balls import enumerate_ball
        ball = enumerate_ball(pres, radius, "geometric")
    return estimate_pc_invasion(ball, trials, master_seed)


def relative_pc(pres=None, radius=None, p=0.8, trials=100, master_seed=0,
                method="invasion", ball: CayleyBall | None = None, L=None):
    """Estimate p_c of the open subgraph pi_p(x); the target value is p_c(G)/p.

    Raises if more than half the trials lack a boundary-reaching open
    cluster (p too close to or below p_c of the graph).
    """
    if not 0.0 < p <= 1.0:
        raise ValueError(f"p must be in (0, 1], got {p}")
    if method == "crossing":
        est = estimate_pc_crossing(L or (2 * (radius or 32)), trials, master_seed, open_at=p)
    else:
        if ball is None:
            from .balls import enumerate_ball
            ball = enumerate_ball(pres, radius, "geometric")
        est = estimate_pc_invasion(ball, trials, master_seed, open_at=p)
    if est.failures > trials / 2:
        raise RuntimeError(
            f"open subgraph at p={p} reached the boundary in only "
            f"{trials - est.failures}/{trials} trials; p is too small")
    return est

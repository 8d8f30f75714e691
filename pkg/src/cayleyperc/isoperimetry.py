"""Upper bounds on the edge-isoperimetric constant from finite balls.

Any finite connected vertex set F inside the ball *interior* sees every one
of its infinite-graph boundary edges inside the ball, so |boundary(F)|/|F|
is a true upper bound on iota_E of the infinite graph.  By translation
invariance and the fact that a disconnected minimizer has a component at
least as good, it suffices to search connected sets containing the origin.

Modes:

* exhaustive -- enumerate every connected origin-containing subset of size
  <= subset_cap exactly once (certified); aborts to greedy when the state
  budget blows up.
* tree-identity -- on provably acyclic Cayley graphs every connected m-set
  has boundary (d-2)m + 2 exactly, so the certified optimum per size is
  closed-form and the infimum over all finite sets is d - 2 (reported as
  ``iota_exact``).
* greedy -- grow the set by always adding the neighbor that minimizes the
  resulting boundary (non-certified upper bounds only).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .balls import CayleyBall
from .errors import CapExceededError

DEFAULT_STATE_BUDGET = 3_000_000


@dataclass(frozen=True)
class IsoperimetricReport:
    iota_upper: float           # best |dF|/|F| found (a certified upper bound on iota)
    witness: tuple              # the vertex set realizing iota_upper
    subset_cap: int
    mode: str                   # exhaustive | tree-identity | greedy
    certified: bool             # True when the per-size optimum is exact
    iota_exact: float | None = None   # exact infimum when provable (trees)
    ratios_by_size: dict = field(default_factory=dict)  # m -> best ratio at size m
    iota_lower_from_rho: float | None = None            # filled by bound_chain

    def recomputed_ratio(self, ball: CayleyBall) -> float:
        return boundary_ratio(ball, self.witness)


def boundary_ratio(ball: CayleyBall, subset) -> float:
    """|boundary edges|/|F| recomputed from scratch for a vertex set."""
    fs = set(int(v) for v in subset)
    if not fs:
        raise ValueError("empty subset")
    interior = set(ball.interior.tolist())
    if not fs <= interior:
        raise ValueError("subset must lie in the ball interior")
    cut = 0
    for e in range(ball.n_edges):
        u, v = int(ball.edge_u[e]), int(ball.edge_v[e])
        if (u in fs) != (v in fs):
            cut += 1
    return cut / len(fs)


def _neighbors(ball: CayleyBall):
    return ball.neighbor_lists()


def _exhaustive(ball, nbr, subset_cap, budget):
    """Enumerate connected origin-containing subsets once each.

    Each subset is produced by a canonical insertion sequence: candidates
    are consumed in order and a candidate rejected at one level is forbidden
    in the entire subtree below, which is the standard exact-enumeration
    scheme for connected subgraphs.
    """
    deg = np.bincount(ball.edge_u, minlength=ball.n_vertices) \
        + np.bincount(ball.edge_v, minlength=ball.n_vertices)
    interior = np.zeros(ball.n_vertices, dtype=bool)
    interior[ball.interior] = True
    if not interior[0]:
        raise ValueError("ball too small: origin is on the boundary")

    best = {}       # size -> (ratio, witness tuple)
    states = 0

    def visit(size, cut):
        nonlocal states
        states += 1
        if states > budget:
            raise CapExceededError(f"exhaustive search exceeded {budget} states")

    in_sub = np.zeros(ball.n_vertices, dtype=bool)
    in_sub[0] = True
    sub = [0]

    def edges_into(v):
        return sum(1 for w in nbr[v] if in_sub[w])

    def rec(cand, forbidden, cut):
        visit(len(sub), cut)
        cur = best.get(len(sub))
        ratio = cut / len(sub)
        if cur is None or ratio < cur[0] or (ratio == cur[0] and tuple(sorted(sub)) < cur[1]):
            best[len(sub)] = (ratio, tuple(sorted(sub)))
        if len(sub) == subset_cap:
            return
        local_forbidden = set()
        for i, v in enumerate(cand):
            c = edges_into(v)
            in_sub[v] = True
            sub.append(v)
            new_cand = cand[i + 1:] + [w for w in nbr[v]
                                       if interior[w] and not in_sub[w]
                                       and w not in forbidden
                                       and w not in local_forbidden
                                       and w not in cand]
            rec(new_cand, forbidden | local_forbidden, cut + deg[v] - 2 * c)
            sub.pop()
            in_sub[v] = False
            local_forbidden.add(v)

    rec([w for w in nbr[0] if interior[w]], frozenset(), int(deg[0]))
    return best


def _greedy(ball, nbr, subset_cap):
    deg = np.bincount(ball.edge_u, minlength=ball.n_vertices) \
        + np.bincount(ball.edge_v, minlength=ball.n_vertices)
    interior = np.zeros(ball.n_vertices, dtype=bool)
    interior[ball.interior] = True
    in_sub = np.zeros(ball.n_vertices, dtype=bool)
    in_sub[0] = True
    sub = [0]
    cut = int(deg[0])
    best = {1: (float(cut), (0,))}
    frontier = {w for w in nbr[0] if interior[w]}
    while len(sub) < subset_cap and frontier:
        scored = []
        for v in frontier:
            c = sum(1 for w in nbr[v] if in_sub[w])
            scored.append((cut + int(deg[v]) - 2 * c, v))
        scored.sort()
        new_cut, v = scored[0]
        in_sub[v] = True
        sub.append(v)
        cut = new_cut
        frontier.discard(v)
        frontier.update(w for w in nbr[v] if interior[w] and not in_sub[w])
        best[len(sub)] = (cut / len(sub), tuple(sorted(sub)))
    return best


def _tree_identity(ball, nbr, subset_cap):
    """Closed-form optimum on acyclic graphs: |dF| = (d-2)|F| + 2."""
    d = ball.geometric_degree
    interior = set(ball.interior.tolist())
    # BFS-first subtree of size subset_cap as the witness
    sub = [0]
    seen = {0}
    queue = [0]
    while queue and len(sub) < subset_cap:
        v = queue.pop(0)
        for w in nbr[v]:
            if w in interior and w not in seen:
                seen.add(w)
                sub.append(w)
                queue.append(w)
                if len(sub) == subset_cap:
                    break
    m_max = len(sub)
    best = {m: ((d - 2) * m + 2) / m for m in range(1, m_max + 1)}
    return best, tuple(sorted(sub)), m_max


def isoperimetric_search(ball: CayleyBall, subset_cap: int,
                         state_budget: int = DEFAULT_STATE_BUDGET,
                         force_mode: str | None = None) -> IsoperimetricReport:
    """Best boundary ratio over connected origin-containing interior subsets.

    The result's ``iota_upper`` is recomputed independently from the stored
    witness before returning.
    """
    if ball.mode != "geometric":
        raise ValueError("isoperimetric search needs a geometric ball")
    if subset_cap < 1:
        raise ValueError("subset_cap must be >= 1")
    if len(ball.interior) == 0:
        raise ValueError("ball has no interior vertices")
    nbr = _neighbors(ball)

    if force_mode not in (None, "exhaustive", "greedy", "tree-identity"):
        raise ValueError(f"unknown mode {force_mode!r}")

    mode = force_mode
    if mode is None:
        mode = "tree-identity" if ball.pres.is_tree_graph() else "exhaustive"

    iota_exact = None
    if mode == "tree-identity":
        if not ball.pres.is_tree_graph():
            raise ValueError("tree-identity mode on a non-tree presentation")
        ratios, witness, m_max = _tree_identity(ball, nbr, subset_cap)
        d = ball.geometric_degree
        iota_exact = float(d - 2)
        best_m = max(ratios)            # ratio decreasing in m
        certified = True
        best = {m: (r, witness if m == best_m else None) for m, r in ratios.items()}
        witness_best = witness
    else:
        try:
            if mode == "greedy":
                raise CapExceededError("forced greedy")
            best = _exhaustive(ball, nbr, subset_cap, state_budget)
            certified = True
            mode = "exhaustive"
        except CapExceededError:
            best = _greedy(ball, nbr, subset_cap)
            certified = False
            mode = "greedy"
        best_m = min(best, key=lambda m: (best[m][0], m))
        witness_best = best[best_m][1]

    ratios_by_size = {m: v[0] if isinstance(v, tuple) else v for m, v in best.items()}
    report = IsoperimetricReport(
        iota_upper=boundary_ratio(ball, witness_best),
        witness=witness_best,
        subset_cap=subset_cap,
        mode=mode,
        certified=certified,
        iota_exact=iota_exact,
        ratios_by_size=ratios_by_size,
    )
    return report

"""Assembly of the p_c / p_u bound chain and the k-fold spectral search.

The chain, for a Cayley graph with family size d, spectral radius rho,
edge-isoperimetric constant iota and cycle growth gamma:

    p_c <= 1/(iota+1) < 1/iota <= 1/(d(1-rho)) <= 1/(d rho) <= 1/gamma <= p_u

with the two outer links valid unconditionally and the middle passage
requiring rho <= 1/2 (then p_c < p_u).  Every reported number carries a
provenance tag: certified-bound, estimate, or diagnostic.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .balls import enumerate_ball
from .cycles import count_simple_cycles, gamma_estimate
from .errors import CapExceededError
from .isoperimetry import IsoperimetricReport, isoperimetric_search
from .presentations import GroupPresentation
from .walks import SpectralEstimate, mohar_lower_bound, spectral_radius


@dataclass(frozen=True)
class BoundReport:
    d: int                              # family size (walk-operator degree)
    geometric_degree: int
    rho: SpectralEstimate
    iota: IsoperimetricReport | None
    gamma_hat: float | None             # uncertified estimate; None if census skipped
    gamma_points: dict | None
    pc_upper_from_rho: float            # 1/(d(1-rho_upper)+1)
    pc_upper_from_iota: float | None    # 1/(iota+1) with iota = iota_exact or iota_upper
    pu_lower: float | None              # 1/gamma_hat, or 1/(d rho_upper) fallback
    pu_lower_source: str                # gamma | rho | vacuous
    chain_valid: bool                   # rho_upper <= 1/2
    mohar_geometric_valid: bool         # P = A/d, so the Mohar link bounds the simple graph
    k_used: int | None = None
    provenance: dict = field(default_factory=dict)


def _mohar_applies(pres: GroupPresentation) -> bool:
    """The walk operator equals (geometric adjacency)/d exactly when the
    family has no repeats and no identity: then Mohar's bound constrains the
    simple-graph isoperimetric constant."""
    gens = pres.generators
    return len(set(gens)) == len(gens) and not pres.contains_identity


def bound_chain(pres: GroupPresentation, radius: int, n_max: int, subset_cap: int,
                gamma_n_max: int | None = None, ball_cap: int = 2_000_000,
                k_used: int | None = None) -> BoundReport:
    """Compute every link of the chain that is feasible at this scale.

    The isoperimetric search and cycle census are skipped (fields None) when
    the geometric ball they need exceeds ``ball_cap`` vertices; the p_u link
    then falls back to the certified relation gamma <= d*rho.
    """
    rho = spectral_radius(pres, n_max)
    d = pres.d
    prov = {"rho": "estimate (fit with n^-3/2 correction; lower bound certified)"}

    iota = None
    gamma_hat = None
    gamma_points = None
    try:
        ball = enumerate_ball(pres, radius, "geometric", ball_cap=ball_cap)
    except CapExceededError:
        ball = None
        prov["iota"] = "skipped: geometric ball exceeds cap"
        prov["gamma"] = "skipped: geometric ball exceeds cap"

    if ball is not None and subset_cap >= 1 and len(ball.interior) > 0:
        iota = isoperimetric_search(ball, subset_cap)
        iota = IsoperimetricReport(
            iota_upper=iota.iota_upper, witness=iota.witness,
            subset_cap=iota.subset_cap, mode=iota.mode, certified=iota.certified,
            iota_exact=iota.iota_exact, ratios_by_size=iota.ratios_by_size,
            iota_lower_from_rho=mohar_lower_bound(d, rho.upper_bound),
        )
        prov["iota"] = ("certified-bound (exact infimum)" if iota.iota_exact is not None
                        else "certified-bound (upper)" if iota.certified
                        else "estimate (greedy)")

    if ball is not None and gamma_n_max and gamma_n_max >= 3:
        census_radius = (gamma_n_max + 1) // 2
        if census_radius <= ball.radius:
            census = count_simple_cycles(ball, gamma_n_max)
            gamma_hat, gamma_points = gamma_estimate(census)
            prov["gamma"] = "estimate (uncertified: finite census of a limsup)"
        else:
            prov["gamma"] = f"skipped: need radius >= {census_radius}"

    pc_rho = 1.0 / (d * (1.0 - rho.upper_bound) + 1.0)
    prov["pc_upper_from_rho"] = "estimate (certified modulo the rho fit margin)"

    pc_iota = None
    if iota is not None:
        if iota.iota_exact is not None:
            pc_iota = 1.0 / (iota.iota_exact + 1.0)
            prov["pc_upper_from_iota"] = "certified-bound (tree identity)"
        else:
            pc_iota = 1.0 / (iota.iota_upper + 1.0)
            prov["pc_upper_from_iota"] = ("diagnostic (iota_upper overestimates the "
                                          "optimal bound; not a certified p_c bound)")

    if gamma_hat is not None and gamma_hat > 1.0:
        pu_lower = 1.0 / gamma_hat
        pu_source = "gamma"
        prov["pu_lower"] = "estimate (1/gamma_hat, uncertified)"
    elif gamma_hat is not None:
        pu_lower = None
        pu_source = "vacuous"
        prov["pu_lower"] = "vacuous (gamma_hat <= 1: no nontrivial cycle growth seen)"
    else:
        pu_lower = 1.0 / (d * rho.upper_bound) if rho.upper_bound > 0 else None
        pu_source = "rho"
        prov["pu_lower"] = "estimate (fallback 1/(d rho) via gamma <= d rho)"

    return BoundReport(
        d=d, geometric_degree=pres.geometric_degree, rho=rho, iota=iota,
        gamma_hat=gamma_hat, gamma_points=gamma_points,
        pc_upper_from_rho=pc_rho, pc_upper_from_iota=pc_iota,
        pu_lower=pu_lower, pu_lower_source=pu_source,
        chain_valid=rho.upper_bound <= 0.5,
        mohar_geometric_valid=_mohar_applies(pres),
        k_used=k_used, provenance=prov,
    )


def pak_smirnova_k(pres: GroupPresentation, n_max: int = 160,
                   amenability_margin: float = 0.02):
    """Smallest k with rho_upper^k <= 1/2 for a lazified family.

    Requires the identity in the family (the k-fold spectral identity
    P^k = walk operator of S^[k] is applied to a lazy walk) and a spectral
    upper bound clearly below 1.  Returns (k, family_size, rho_k_bound).
    """
    if not pres.contains_identity:
        raise ValueError("pak_smirnova_k expects a lazified family (identity in S)")
    rho = spectral_radius(pres, n_max)
    if rho.upper_bound >= 1.0 - amenability_margin:
        raise ValueError(
            f"amenable or undetermined: rho upper bound {rho.upper_bound:.4f} "
            f">= {1.0 - amenability_margin:.4f}")
    k = 1
    bound = rho.upper_bound
    while bound > 0.5:
        k += 1
        bound = rho.upper_bound ** k
    return k, pres.d ** k, bound

"""Return-probability dynamic programming and spectral-radius estimation.

The walk operator averages over the generating family with multiplicity:
one step multiplies by a uniformly chosen family member, so

    (P f)(g) = (1/d) * sum_i f(g s_i),   d = family size.

Engines, chosen automatically:

* lattice  -- exact convolution on a dict of lattice points (any family);
* free, radial -- the distribution of a radially symmetric walk on the
  2k-regular tree depends only on the distance from the origin, so the DP
  runs on distances.  Valid whenever every non-identity generator is a
  single letter and each of the 2k letters appears with equal multiplicity;
  this covers the standard family, its lazified variant and anything the
  k-fold construction produces from those (handled by composing k base
  steps per k-fold step, since a uniform draw from S^[k] is distributed as
  the product of k independent uniform draws from S).
* free, generic -- dict-of-words convolution, capped (support grows
  exponentially; only usable for small step counts).

Rational mode keeps exact ``Fraction`` probabilities; float mode is the
default beyond small step counts.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import CapExceededError
from .presentations import GroupPresentation

DEFAULT_SUPPORT_CAP = 2_000_000
DEFAULT_EXACT_STEP_CAP = 64


@dataclass(frozen=True)
class WalkDistribution:
    """Distribution of the walk at a fixed step.

    ``support`` maps a state to its probability.  States are group elements
    for the lattice/generic engines and distances from the origin for the
    radial tree engine (``radial=True``); either way the mass at the origin
    is ``support.get(origin_state, 0)``.
    """

    step: int
    support: dict
    family_size: int
    radial: bool = False

    @property
    def origin_state(self):
        return 0 if self.radial else None  # None means "ask return_probability"

    def total(self):
        return sum(self.support.values())


@dataclass(frozen=True)
class SpectralEstimate:
    rho_hat: float
    lower_bound: float          # max_n p_{2n}^{1/(2n)}, monotone for P = P*
    upper_bound: float
    n_max: int
    method: str                 # raw_root | polynomial_fit
    fit_margin: float = 0.0
    return_probs: dict = None   # 2n -> p_{2n}


def _require_symmetric(pres: GroupPresentation):
    if not pres.symmetric:
        raise ValueError(
            f"family of {pres.name} is not symmetric; the walk operator is not self-adjoint")


def _radial_profile(pres: GroupPresentation):
    """(k, n_letters_mult, n_id) when the free family is radially symmetric, else None.

    Radial means: some multiplicity c for every one of the 2k letters, plus
    any number of identity copies.  Only then does the distance projection
    of the walk stay Markov.
    """
    if pres.family != "free":
        return None
    k = max((abs(c) for w in pres.generators for c in w), default=1)
    counts = Counter(pres.generators)
    n_id = counts.pop((), 0)
    letters = {(i,) for i in range(1, k + 1)} | {(-i,) for i in range(1, k + 1)}
    if set(counts) != letters:
        return None
    mults = set(counts.values())
    if len(mults) != 1:
        return None
    return k, mults.pop(), n_id


def _step_radial(q, k, c, n_id, d, exact):
    """One family step on the distance chain of the 2k-regular tree."""
    zero = Fraction(0) if exact else 0.0
    out = [zero] * (len(q) + 1)
    if exact:
        w_id = Fraction(n_id, d)
        w_back = Fraction(c, d)
        w_fwd = Fraction(c * (2 * k - 1), d)
        w_all = Fraction(c * 2 * k, d)
    else:
        w_id = n_id / d
        w_back = c / d
        w_fwd = c * (2 * k - 1) / d
        w_all = c * 2 * k / d
    for m, pm in enumerate(q):
        if not pm:
            continue
        if n_id:
            out[m] += pm * w_id
        if m == 0:
            out[1] += pm * w_all
        else:
            out[m - 1] += pm * w_back
            out[m + 1] += pm * w_fwd
    while len(out) > 1 and not out[-1]:
        out.pop()
    return out


def _step_convolve(dist, pres, weights, support_cap):
    out = {}
    for g, pg in dist.items():
        for s, w in weights:
            h = pres.mul(g, s)
            out[h] = out.get(h, 0) + pg * w
    if len(out) > support_cap:
        raise CapExceededError(
            f"walk support {len(out)} exceeds cap {support_cap}")
    return out


def return_probabilities(pres: GroupPresentation, n_max: int, exact: bool = False,
                         kfold: int = 1, support_cap: int = DEFAULT_SUPPORT_CAP,
                         keep_distributions: bool = False):
    """Exact powers of the walk operator applied to the delta at the origin.

    Returns ``(probs, dists)`` where probs maps 2n -> p_{2n}(origin, origin)
    for 2n <= n_max (steps counted in S^[kfold] applications) and dists is a
    list of WalkDistribution at even steps (empty unless keep_distributions).
    """
    _require_symmetric(pres)
    if n_max < 2:
        raise ValueError(f"n_max must be >= 2, got {n_max}")

    base = pres
    k_steps = kfold
    while base.derived and base.derived[0] == "kfold":
        k_steps *= base.derived[2]
        base = base.derived[1]
    if exact and n_max * k_steps > DEFAULT_EXACT_STEP_CAP:
        raise CapExceededError(
            f"exact mode capped at {DEFAULT_EXACT_STEP_CAP} base steps, "
            f"requested {n_max * k_steps}")

    d = base.d
    probs = {}
    dists = []

    profile = _radial_profile(base)
    if profile is not None:
        k, c, n_id = profile
        q = [Fraction(1)] if exact else [1.0]
        for n in range(1, n_max + 1):
            for _ in range(k_steps):
                q = _step_radial(q, k, c, n_id, d, exact)
            if n % 2 == 0:
                probs[n] = q[0]
                if keep_distributions:
                    dists.append(WalkDistribution(n, {m: p for m, p in enumerate(q) if p},
                                                  pres.d, radial=True))
        return probs, dists

    one = Fraction(1) if exact else 1.0
    if exact:
        weights = [(s, Fraction(m, d)) for s, m in Counter(base.generators).items()]
    else:
        weights = [(s, m / d) for s, m in Counter(base.generators).items()]
    dist = {base.identity: one}
    for n in range(1, n_max + 1):
        for _ in range(k_steps):
            dist = _step_convolve(dist, base, weights, support_cap)
        if n % 2 == 0:
            probs[n] = dist.get(base.identity, 0 * one)
            if keep_distributions:
                dists.append(WalkDistribution(n, dict(dist), pres.d))
    return probs, dists


def _fit_log_rho(probs):
    """OLS fit of log p_{2n} ~ (2n) log(rho) - 1.5 log(n) + c over the top half window."""
    ns = sorted(n for n, p in probs.items() if p > 0)
    window = [n for n in ns if n >= ns[-1] / 2]
    if len(window) < 2:
        window = ns
    xs = np.array(window, dtype=float)
    ys = np.array([math.log(probs[n]) + 1.5 * math.log(n / 2) for n in window])
    if len(xs) < 2:
        raise ValueError("fit underdetermined: fewer than 2 usable return probabilities")
    A = np.vstack([xs, np.ones_like(xs)]).T
    coef, *_ = np.linalg.lstsq(A, ys, rcond=None)
    resid = ys - A @ coef
    if len(xs) > 2:
        s2 = float(resid @ resid) / (len(xs) - 2)
        sxx = float(((xs - xs.mean()) ** 2).sum())
        se_slope = math.sqrt(s2 / sxx)
        drift = abs(float(resid[-1] - resid[0])) / float(xs[-1] - xs[0])
    else:
        se_slope, drift = 0.05, 0.0
    return float(coef[0]), 3.0 * se_slope + drift


def spectral_radius(pres: GroupPresentation, n_max: int,
                    method: str = "polynomial_fit", kfold: int = 1) -> SpectralEstimate:
    """Estimate rho = ||P||_inf from return probabilities.

    lower_bound is the certified monotone-root bound max p_{2n}^{1/(2n)}.
    polynomial_fit extrapolates with the n^{-3/2} local-limit correction,
    appropriate for tree-like exponential decay; raw_root reports the root
    bound itself and is the honest fallback on amenable graphs where the
    n^{-3/2} ansatz is wrong.
    """
    if method not in ("raw_root", "polynomial_fit"):
        raise ValueError(f"unknown method {method!r}")
    if n_max < 4:
        raise ValueError(f"n_max must be >= 4 for a spectral estimate, got {n_max}")
    probs, _ = return_probabilities(pres, n_max, exact=False, kfold=kfold)
    fprobs = {n: float(p) for n, p in probs.items()}
    roots = {n: fprobs[n] ** (1.0 / n) for n in fprobs if fprobs[n] > 0}
    lower = max(roots.values())

    if method == "raw_root":
        return SpectralEstimate(rho_hat=lower, lower_bound=lower, upper_bound=1.0,
                                n_max=n_max, method=method, fit_margin=1.0 - lower,
                                return_probs=fprobs)

    slope, margin_log = _fit_log_rho(fprobs)
    rho = math.exp(slope)
    margin = margin_log * rho
    rho = min(max(rho, lower), 1.0)
    upper = min(1.0, rho + margin)
    return SpectralEstimate(rho_hat=rho, lower_bound=lower, upper_bound=upper,
                            n_max=n_max, method=method, fit_margin=margin,
                            return_probs=fprobs)


def kfold_spectral_check(pres: GroupPresentation, k: int, n_max: int,
                         tolerance: float = 0.02):
    """Check rho(S^[k]) <= rho(S)^k numerically (equality expected, P self-adjoint).

    Returns (rho_k_hat, rho_hat_pow_k, passed).
    """
    est_base = spectral_radius(pres, n_max)
    est_k = spectral_radius(pres, n_max, kfold=k)
    rho_pow = est_base.rho_hat ** k
    tol = tolerance + est_k.fit_margin + k * est_base.rho_hat ** (k - 1) * est_base.fit_margin
    passed = est_k.rho_hat <= rho_pow + tol
    return est_k.rho_hat, rho_pow, passed


def mohar_lower_bound(d: int, rho_upper: float) -> float:
    """Isoperimetric lower bound iota_E >= d (1 - rho)."""
    if not 0.0 <= rho_upper <= 1.0:
        raise ValueError(f"rho_upper must be in [0, 1], got {rho_upper}")
    return d * (1.0 - rho_upper)

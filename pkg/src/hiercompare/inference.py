"""Decisions and estimates derived from posterior draws.

Covers the left/rope/right probabilities for the next data set, posterior
odds grading, shrinkage estimates of the per-data-set differences and the
closed-form mean squared errors of the MLE and shrinkage estimators.
"""
from __future__ import annotations

import logging
import math
from dataclasses import asdict, dataclass, field
from typing import Dict, List, NamedTuple, Optional

import numpy as np
from scipy import special as sc

from .exceptions import DomainError, InputError, UndefinedOddsError
from .model import SufficientStats
from .sampler import PosteriorDraws

logger = logging.getLogger(__name__)

OUTCOMES = ("left", "rope", "right")
ODDS_PAIRS = (("left", "rope"), ("left", "right"), ("rope", "right"))


class OddsResult(NamedTuple):
    odds: float
    grade: str
    favors: Optional[str]


def posterior_odds(p_a: float, p_b: float) -> OddsResult:
    """Odds ``p_a / p_b`` graded as weak (1-3], positive (3-20] or strong (>20).

    Odds below 1 are graded by their reciprocal, in favor of ``"b"``.
    """
    if p_a < 0 or p_b < 0:
        raise DomainError("probabilities must be non-negative")
    if p_a == 0 and p_b == 0:
        raise UndefinedOddsError("posterior odds undefined: both probabilities are zero")
    odds = math.inf if p_b == 0 else p_a / p_b
    if odds > 1:
        strength, favors = odds, "a"
    elif odds < 1:
        strength, favors = (math.inf if odds == 0 else 1.0 / odds), "b"
    else:
        strength, favors = 1.0, None
    if strength <= 3:
        grade = "weak"
    elif strength <= 20:
        grade = "positive"
    else:
        grade = "strong"
    return OddsResult(odds, grade, favors)


@dataclass
class RopeReport:
    p_left: float
    p_rope: float
    p_right: float
    decision: str
    alpha: float
    n_left: int
    n_rope: int
    n_right: int
    n_samples: int
    odds: List[dict] = field(default_factory=list)

    @property
    def probabilities(self) -> np.ndarray:
        return np.array([self.p_left, self.p_rope, self.p_right])

    def to_dict(self) -> dict:
        return asdict(self)


def rope_masses(delta0, sigma0, nu, r: float) -> np.ndarray:
    """Mass of ``t(delta0, sigma0, nu)`` left of, inside and right of ``[-r, r]``.

    Returns an array shaped ``(..., 3)``; rows sum to one.
    """
    if not r > 0:
        raise DomainError("rope radius must be > 0")
    delta0 = np.asarray(delta0, float)
    left = sc.stdtr(nu, (-r - delta0) / sigma0)
    right = sc.stdtr(nu, (delta0 - r) / sigma0)
    rope = 1.0 - left - right
    return np.stack([left, np.clip(rope, 0.0, 1.0), right], axis=-1)


def count_winners(masses) -> np.ndarray:
    """Count, over rows of ``(left, rope, right)`` masses, which is largest.

    Ties go to the first maximum in the order left, rope, right.
    """
    masses = np.atleast_2d(np.asarray(masses, float))
    return np.bincount(np.argmax(masses, axis=1), minlength=3)


def _odds_table(probs: Dict[str, float]) -> List[dict]:
    table = []
    for a, b in ODDS_PAIRS:
        try:
            res = posterior_odds(probs[a], probs[b])
        except UndefinedOddsError:
            table.append({"a": a, "b": b, "odds": None, "grade": None, "favors": None})
            continue
        favors = {"a": a, "b": b, None: None}[res.favors]
        table.append({"a": a, "b": b, "odds": res.odds, "grade": res.grade, "favors": favors})
    return table


def rope_report_from_counts(counts, alpha: float = 0.05) -> RopeReport:
    counts = [int(c) for c in counts]
    total = sum(counts)
    if total <= 0:
        raise InputError("no samples were counted")
    probs = dict(zip(OUTCOMES, (c / total for c in counts)))
    decision = "none"
    for name in OUTCOMES:
        if probs[name] > 1.0 - alpha:
            decision = name
    return RopeReport(
        p_left=probs["left"], p_rope=probs["rope"], p_right=probs["right"],
        decision=decision, alpha=alpha,
        n_left=counts[0], n_rope=counts[1], n_right=counts[2], n_samples=total,
        odds=_odds_table(probs),
    )


def _pick_rows(n_avail: int, n_samples: int, rng) -> np.ndarray:
    if n_samples == n_avail:
        return np.arange(n_avail)
    return rng.choice(n_avail, size=n_samples, replace=n_samples > n_avail)


def next_delta_simplex(draws: PosteriorDraws, r: float, n_samples: int = 4000, rng=None,
                       alpha: float = 0.05) -> RopeReport:
    """Probabilities that left, rope or right is the most probable outcome on a new data set.

    Each of ``n_samples`` posterior draws of ``(delta0, sigma0, nu)`` defines a
    Student distribution for the next difference; the outcome with the largest
    mass under it receives one count. Draws are subsampled without replacement,
    or resampled with replacement when more are requested than were retained.
    """
    if not r > 0:
        raise DomainError("rope radius must be > 0")
    mat = draws.matrix
    if mat.shape[0] == 0:
        raise InputError("no posterior draws")
    rng = np.random.default_rng(0) if rng is None else rng
    rows = _pick_rows(mat.shape[0], n_samples, rng)
    idx = [draws.names.index(k) for k in ("delta0", "sigma0", "nu")]
    d0, s0, nu = mat[rows][:, idx].T
    counts = count_winners(rope_masses(d0, s0, nu, r))
    return rope_report_from_counts(counts, alpha)


def predictive_deltas(draws: PosteriorDraws, size: int, rng) -> np.ndarray:
    """Sample differences of new data sets from the posterior predictive."""
    mat = draws.matrix
    rows = rng.integers(0, mat.shape[0], size=size)
    idx = [draws.names.index(k) for k in ("delta0", "sigma0", "nu")]
    d0, s0, nu = mat[rows][:, idx].T
    return d0 + s0 * rng.standard_t(nu)


@dataclass
class MapEstimate:
    delta: np.ndarray
    delta0: float
    sigma0_sq: float
    w: float
    sigma_n_sq: float
    converged: bool
    iterations: int


@dataclass
class ShrinkageResult:
    mean: np.ndarray
    sd: np.ndarray
    lower: np.ndarray
    upper: np.ndarray
    map: Optional[MapEstimate] = None

    def to_dict(self) -> dict:
        out = {
            "mean": self.mean.tolist(),
            "sd": self.sd.tolist(),
            "lower95": self.lower.tolist(),
            "upper95": self.upper.tolist(),
        }
        if self.map is not None:
            m = self.map
            out["map"] = {
                "delta": m.delta.tolist(), "delta0": m.delta0, "sigma0_sq": m.sigma0_sq,
                "w": m.w, "sigma_n_sq": m.sigma_n_sq, "converged": m.converged,
                "iterations": m.iterations,
            }
        return out


def shrinkage_estimates(draws: PosteriorDraws) -> ShrinkageResult:
    """Posterior mean, sd and central 95% interval of every ``delta_i``."""
    cols = [i for i, n in enumerate(draws.names) if n.startswith("delta[")]
    d = draws.matrix[:, cols]
    if d.shape[0] == 0:
        raise InputError("no posterior draws")
    lower, upper = np.quantile(d, [0.025, 0.975], axis=0)
    return ShrinkageResult(mean=d.mean(axis=0), sd=d.std(axis=0), lower=lower, upper=upper)


def sigma_n_sq(sigma: float, n: int, rho: float) -> float:
    """Variance of a row mean of ``n`` equicorrelated values: ``sigma^2 (1 + (n-1) rho) / n``."""
    return sigma ** 2 * (1.0 + (n - 1) * rho) / n


def map_fixed_point(stats: SufficientStats, rho: float, tol: float = 1e-10,
                    max_iter: int = 10_000) -> MapEstimate:
    """Fixed-point MAP estimates of the Gaussian hierarchical model with flat hyperprior.

    The common within-data-set variance is taken as the mean of the row
    variances.
    """
    if stats.q < 2:
        raise InputError("need at least two data sets")
    if not 0.0 <= rho < 1.0:
        raise DomainError("rho must lie in [0, 1)")
    xbar = stats.mean
    var_n = sigma_n_sq(math.sqrt(float(np.mean(stats.sd ** 2))), stats.n, rho)
    delta = xbar.copy()
    converged = False
    w = 1.0
    delta0 = float(delta.mean())
    s0 = float(np.mean((delta - delta0) ** 2))
    it = 0
    for it in range(1, max_iter + 1):
        delta0 = float(delta.mean())
        s0 = float(np.mean((delta - delta0) ** 2))
        w = s0 / (s0 + var_n) if s0 + var_n > 0 else 1.0
        new = w * xbar + (1.0 - w) * delta0
        change = float(np.max(np.abs(new - delta)))
        delta = new
        if change < tol:
            converged = True
            break
    if not converged:
        logger.warning("MAP fixed point did not converge after %d iterations", max_iter)
    return MapEstimate(delta=delta, delta0=delta0, sigma0_sq=s0, w=w, sigma_n_sq=var_n,
                       converged=converged, iterations=it)


class MSEForms(NamedTuple):
    mle: float
    shrinkage: float
    shrinkage_opt: float


def mse_closed_forms(sigma: float, n: int, rho: float, sigma0: float, w: float) -> MSEForms:
    """Mean squared errors of the row mean and of ``w * xbar + (1 - w) * delta0``.

    ``shrinkage_opt`` is the shrinkage MSE at ``w = sigma0^2 / (sigma0^2 + sigma_n^2)``.
    """
    if not (sigma > 0 and sigma0 > 0):
        raise DomainError("sigma and sigma0 must be > 0")
    if not 0.0 <= rho < 1.0:
        raise DomainError("rho must lie in [0, 1)")
    if n < 1:
        raise DomainError("n must be positive")
    vn = sigma_n_sq(sigma, n, rho)
    v0 = sigma0 ** 2
    return MSEForms(vn, w * w * vn + (1.0 - w) ** 2 * v0, v0 * vn / (v0 + vn))


def mse_empirical(estimates, truths) -> float:
    est = np.asarray(estimates, float)
    tru = np.asarray(truths, float)
    if est.shape != tru.shape:
        raise InputError("estimates and truths differ in length")
    return float(np.mean((est - tru) ** 2))

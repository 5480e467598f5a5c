"""Classical tests for comparing two classifiers.

* correlated t-test on the fold results of one data set,
* its Bayesian counterpart with a rope, and
* the Wilcoxon signed-rank test on the per-data-set mean differences.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import NamedTuple, Optional

import numpy as np
from scipy import special as sc
from scipy.stats import rankdata

from .exceptions import DegenerateInputError, DomainError, InputError

EXACT_MAX_Q = 12


@dataclass(frozen=True)
class TestResult:
    test: str
    statistic: float
    dof: Optional[float]
    p_value: float
    z: Optional[float] = None
    method: Optional[str] = None
    n_used: Optional[int] = None

    __test__ = False  # not a pytest class

    def __post_init__(self):
        if not 0.0 <= self.p_value <= 1.0:
            raise ValueError(f"p-value {self.p_value} outside [0, 1]")

    def to_dict(self) -> dict:
        return asdict(self)


class RopeProbabilities(NamedTuple):
    left: float
    rope: float
    right: float


def _check_sample(x, rho):
    x = np.asarray(x, dtype=float).ravel()
    if x.size < 2:
        raise InputError("need at least two fold results")
    if not 0.0 <= rho < 1.0:
        raise DomainError("rho must lie in [0, 1)")
    s = x.std(ddof=1)
    # a constant row can still give a rounding-level sd
    if np.ptp(x) == 0 or not s > 0:
        raise DegenerateInputError("fold results have zero variance")
    return x, s


def correlated_standard_error(s: float, n: int, rho: float) -> float:
    """Standard error of the mean of ``n`` correlated fold results."""
    return s * math.sqrt(1.0 / n + rho / (1.0 - rho))


def correlated_t_test(x, rho: float) -> TestResult:
    """Two-sided correlated t-test of zero mean difference (n - 1 dof)."""
    x, s = _check_sample(x, rho)
    n = x.size
    t = x.mean() / correlated_standard_error(s, n, rho)
    p = 2.0 * sc.stdtr(n - 1, -abs(t))
    return TestResult("correlated_t", float(t), float(n - 1), float(min(1.0, p)))


def bayes_correlated_t_test(x, rho: float, r: float = 0.01) -> RopeProbabilities:
    """Posterior mass of the mean difference left of, inside and right of ``[-r, r]``.

    The posterior is Student with ``n - 1`` dof, location the sample mean and
    scale the correlated standard error.
    """
    if not r > 0:
        raise DomainError("rope radius must be > 0")
    x, s = _check_sample(x, rho)
    n = x.size
    scale = correlated_standard_error(s, n, rho)
    loc = x.mean()
    left = float(sc.stdtr(n - 1, (-r - loc) / scale))
    right = float(sc.stdtr(n - 1, (loc - r) / scale))
    return RopeProbabilities(left, 1.0 - left - right, right)


def _exact_upper_tail(doubled_ranks: np.ndarray) -> np.ndarray:
    """Null distribution of twice the signed-rank sum, by counting sign patterns.

    ``doubled_ranks`` are integers (average ranks times two), so ties are exact.
    Returns counts indexed by the doubled statistic.
    """
    total = int(doubled_ranks.sum())
    counts = np.zeros(total + 1, dtype=np.int64)
    counts[0] = 1
    for r in doubled_ranks:
        r = int(r)
        shifted = np.zeros_like(counts)
        shifted[r:] = counts[:total + 1 - r]
        counts = counts + shifted
    return counts


def signed_rank_test(xbar, exact: Optional[bool] = None) -> TestResult:
    """Two-sided Wilcoxon signed-rank test of zero median.

    Zero values are dropped before ranking; tied magnitudes get average ranks.
    With ``exact=None`` the exact null distribution is used for at most 12
    non-zero values, otherwise the normal approximation with tie and
    continuity corrections.
    """
    x = np.asarray(xbar, dtype=float).ravel()
    x = x[x != 0]
    q = x.size
    if q == 0:
        raise DegenerateInputError("all differences are zero")
    ranks = rankdata(np.abs(x))
    t_plus = float(ranks[x > 0].sum())
    if exact is None:
        exact = q <= EXACT_MAX_Q
    if exact:
        doubled = np.rint(2 * ranks).astype(np.int64)
        counts = _exact_upper_tail(doubled)
        t2 = int(round(2 * t_plus))
        n_patterns = counts.sum()
        lower = counts[:t2 + 1].sum() / n_patterns
        upper = counts[t2:].sum() / n_patterns
        p = min(1.0, 2.0 * min(lower, upper))
        return TestResult("signed_rank", t_plus, None, float(p), method="exact", n_used=q)
    mean = q * (q + 1) / 4.0
    _, tie_counts = np.unique(ranks, return_counts=True)
    var = q * (q + 1) * (2 * q + 1) / 24.0 - (tie_counts ** 3 - tie_counts).sum() / 48.0
    if not var > 0:
        raise DegenerateInputError("signed-rank variance is zero")
    diff = max(abs(t_plus - mean) - 0.5, 0.0)
    z = math.copysign(diff / math.sqrt(var), t_plus - mean)
    p = min(1.0, math.erfc(abs(z) / math.sqrt(2.0)))
    return TestResult("signed_rank", t_plus, None, float(p), z=float(z), method="normal", n_used=q)

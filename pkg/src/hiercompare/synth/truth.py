"""Ground-truth accuracy differences and direct cross-validation-like draws."""
from __future__ import annotations

import math

import numpy as np
from sklearn.base import clone

from ..exceptions import DomainError
from .classifiers import GiniTree, LinearDiscriminant
from .friedman import FriedmanSetting, friedman_generate, with_threshold


def true_delta(setting: FriedmanSetting, reps: int = 500, test_size: int = 5000, rng=None,
               clf_a=None, clf_b=None):
    """Mean and standard error of ``acc(a) - acc(b)`` over independent train/test draws.

    Defaults compare :class:`LinearDiscriminant` (a) against :class:`GiniTree` (b).
    Each repetition trains on a fresh data set of the setting's size and scores
    on a fresh ``test_size`` set.
    """
    if reps < 2:
        raise DomainError("need reps >= 2")
    rng = np.random.default_rng() if rng is None else rng
    clf_a = LinearDiscriminant() if clf_a is None else clf_a
    clf_b = GiniTree() if clf_b is None else clf_b
    setting = with_threshold(setting, rng)
    d = np.empty(reps)
    for j in range(reps):
        train = friedman_generate(setting, rng)
        test = friedman_generate(setting, rng, size=test_size)
        acc = [np.mean(clone(c).fit(train.X, train.y).predict(test.X) == test.y) for c in (clf_a, clf_b)]
        d[j] = acc[0] - acc[1]
    return float(d.mean()), float(d.std(ddof=1) / math.sqrt(reps))


def equicorrelated_cv(deltas, sigma, rho: float, n: int, rng) -> np.ndarray:
    """Rows drawn from ``MVN(1 * delta_i, Sigma)`` with equicorrelated ``Sigma``.

    ``sigma`` is a scalar or one standard deviation per row. Values are clipped
    to [-1, 1].
    """
    deltas = np.asarray(deltas, float)
    sigma = np.broadcast_to(np.asarray(sigma, float), deltas.shape)
    if not 0.0 <= rho < 1.0:
        raise DomainError("rho must lie in [0, 1)")
    # shared component gives correlation rho, idiosyncratic part the remainder
    shared = rng.standard_normal((deltas.size, 1))
    own = rng.standard_normal((deltas.size, n))
    x = deltas[:, None] + sigma[:, None] * (math.sqrt(rho) * shared + math.sqrt(1.0 - rho) * own)
    return np.clip(x, -1.0, 1.0)

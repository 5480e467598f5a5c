"""Two single-feature classifiers with a known accuracy difference.

Data come from a naive Bayes network ``G <- C -> F`` with ``P(c0) = 0.5``,
``P(f0|c0) = P(f1|c1) = theta_f`` and ``P(g0|c0) = P(g1|c1) = theta_g``, where
``theta_g = theta_f + delta``. The classifier that reads only ``F`` has
expected accuracy ``theta_f``, the one reading ``G`` has ``theta_g``.
Reported fold differences are ``acc(C->G) - acc(C->F)`` so their expectation
is ``+delta``.
"""
from __future__ import annotations

import numpy as np

from ..exceptions import DomainError
from .crossval import kfold_indices

THETA_F = 0.9


def feasible_interval(theta_f: float = THETA_F):
    """Open interval of ``delta`` keeping ``theta_g`` in (0.5, 1)."""
    return 0.5 - theta_f, 1.0 - theta_f


def nb_sample(delta: float, n_instances: int, rng, theta_f: float = THETA_F):
    theta_g = theta_f + delta
    if not 0.0 < theta_g < 1.0:
        raise DomainError(f"theta_f + delta = {theta_g} must lie in (0, 1)")
    c = (rng.random(n_instances) < 0.5).astype(np.int8)
    # feature agrees with the class with probability theta
    f = np.where(rng.random(n_instances) < theta_f, c, 1 - c).astype(np.int8)
    g = np.where(rng.random(n_instances) < theta_g, c, 1 - c).astype(np.int8)
    return c, f, g


def _predict_table(train_counts):
    """Per-fold prediction for each feature value from training counts.

    ``train_counts[fold, c, v]`` counts training items of class ``c`` with
    feature value ``v``. Naive Bayes with Laplace smoothing on the class prior
    and the conditional; a training fold holding one class only predicts that
    class. Returns ``pred[fold, v]``.
    """
    n_c = train_counts.sum(axis=2)
    n = n_c.sum(axis=1, keepdims=True)
    prior = (n_c + 1.0) / (n + 2.0)
    cond = (train_counts + 1.0) / (n_c[:, :, None] + 2.0)
    score = prior[:, :, None] * cond
    majority = (n_c[:, 1] > n_c[:, 0]).astype(np.int64)[:, None]
    pred = np.where(score[:, 1] > score[:, 0], 1, np.where(score[:, 1] < score[:, 0], 0, majority))
    single = (n_c == 0).any(axis=1)
    pred[single] = majority[single]
    return pred


def _fold_accuracy(c, x, fold_id, k):
    counts = np.zeros((k, 2, 2))
    np.add.at(counts, (fold_id, c, x), 1.0)
    train = counts.sum(axis=0, keepdims=True) - counts
    pred = _predict_table(train)
    folds = np.arange(k)[:, None]
    correct = counts[folds, pred, np.arange(2)[None, :]].sum(axis=1)
    return correct / counts.sum(axis=(1, 2))


def nb_pair_cv(delta: float, n_instances: int = 100, m: int = 10, k: int = 10, rng=None,
               theta_f: float = THETA_F) -> np.ndarray:
    """Fold accuracy differences ``acc(C->G) - acc(C->F)`` over ``m`` runs of ``k``-fold CV."""
    if k < 2:
        raise DomainError("need k >= 2 folds")
    if n_instances < 2 * k:
        raise DomainError("need at least 2k instances")
    rng = np.random.default_rng() if rng is None else rng
    c, f, g = nb_sample(delta, n_instances, rng, theta_f)
    out = np.empty((m, k))
    for run in range(m):
        fold_id = np.empty(n_instances, dtype=np.int64)
        for j, test in enumerate(kfold_indices(n_instances, k, rng)):
            fold_id[test] = j
        out[run] = _fold_accuracy(c, g, fold_id, k) - _fold_accuracy(c, f, fold_id, k)
    return out.ravel()

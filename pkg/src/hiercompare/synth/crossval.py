"""Paired cross-validation of two classifiers."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from sklearn.base import clone

from ..exceptions import DomainError, InputError


@dataclass(frozen=True)
class Dataset:
    X: np.ndarray
    y: np.ndarray

    def __post_init__(self):
        X = np.asarray(self.X, dtype=float)
        y = np.asarray(self.y)
        if X.ndim != 2 or y.ndim != 1 or X.shape[0] != y.shape[0]:
            raise InputError("X must be 2-D with one label per row")
        if not np.all(np.isfinite(X)):
            raise InputError("features contain missing or non-finite values")
        if not np.all(np.isin(y, (0, 1))):
            raise InputError("labels must be 0 or 1")
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "y", y.astype(int))

    def __len__(self):
        return self.y.shape[0]


def kfold_indices(n: int, k: int, rng):
    """Shuffle ``range(n)`` and cut it into ``k`` test folds.

    When ``k`` does not divide ``n`` the first ``n % k`` folds get one extra item.
    """
    if not 1 <= k <= n:
        raise DomainError("need 1 <= k <= n")
    perm = rng.permutation(n)
    sizes = np.full(k, n // k)
    sizes[: n % k] += 1
    return np.split(perm, np.cumsum(sizes)[:-1])


def cross_validate_pair(data: Dataset, clf_a, clf_b, m: int = 10, k: int = 10, rng=None) -> np.ndarray:
    """Accuracy differences ``acc(a) - acc(b)`` on identical folds, run-major order.

    ``clf_a`` and ``clf_b`` are unfitted scikit-learn style estimators; they are
    cloned for every fold.
    """
    n = len(data)
    if n < 2 * k:
        raise DomainError("dataset must have at least 2k instances")
    rng = np.random.default_rng() if rng is None else rng
    out = []
    for _ in range(m):
        for test in kfold_indices(n, k, rng):
            train = np.ones(n, dtype=bool)
            train[test] = False
            accs = []
            for clf in (clf_a, clf_b):
                model = clone(clf).fit(data.X[train], data.y[train])
                accs.append(np.mean(model.predict(data.X[test]) == data.y[test]))
            out.append(accs[0] - accs[1])
    return np.array(out)

"""Small two-class classifiers with the scikit-learn estimator interface."""
from __future__ import annotations

import numpy as np
from scipy import linalg
from sklearn.base import BaseEstimator, ClassifierMixin
from sklearn.utils.validation import check_array, check_is_fitted, check_X_y


class _MajorityFallback:
    def _set_classes(self, y):
        self.classes_, y_idx = np.unique(y, return_inverse=True)
        if self.classes_.size > 2:
            raise ValueError("only two-class problems are supported")
        counts = np.bincount(y_idx, minlength=self.classes_.size)
        self.majority_ = int(np.argmax(counts))
        return y_idx


class LinearDiscriminant(_MajorityFallback, ClassifierMixin, BaseEstimator):
    """Two-class linear discriminant analysis with a pooled covariance.

    Parameters
    ----------
    ridge : float, default=1e-6
        Added to the covariance diagonal as ``ridge * trace / d``.
    """

    def __init__(self, ridge=1e-6):
        self.ridge = ridge

    def fit(self, X, y):
        X, y = check_X_y(X, y)
        y_idx = self._set_classes(y)
        self.n_features_in_ = X.shape[1]
        if self.classes_.size < 2:
            self.coef_ = None
            return self
        X0, X1 = X[y_idx == 0], X[y_idx == 1]
        mu0, mu1 = X0.mean(axis=0), X1.mean(axis=0)
        resid = np.vstack([X0 - mu0, X1 - mu1])
        cov = resid.T @ resid / max(X.shape[0] - 2, 1)
        d = X.shape[1]
        cov[np.diag_indices(d)] += self.ridge * np.trace(cov) / d + 1e-12
        diff = mu1 - mu0
        try:
            w = linalg.solve(cov, diff, assume_a="pos")
        except (linalg.LinAlgError, ValueError):
            w = linalg.lstsq(cov, diff)[0]
        prior1 = X1.shape[0] / X.shape[0]
        self.coef_ = w
        self.intercept_ = -0.5 * w @ (mu0 + mu1) + np.log(prior1 / (1.0 - prior1))
        return self

    def decision_function(self, X):
        check_is_fitted(self, "classes_")
        X = check_array(X)
        if self.coef_ is None:
            return np.zeros(X.shape[0])
        return X @ self.coef_ + self.intercept_

    def predict(self, X):
        check_is_fitted(self, "classes_")
        X = check_array(X)
        if self.coef_ is None:
            return np.full(X.shape[0], self.classes_[self.majority_])
        return self.classes_[(self.decision_function(X) > 0).astype(int)]


class GiniTree(_MajorityFallback, ClassifierMixin, BaseEstimator):
    """Binary CART-style tree: Gini impurity, axis-aligned splits, majority leaves.

    Parameters
    ----------
    max_depth : int, default=10
    min_leaf : int, default=5
        Minimum number of training items on each side of a split.
    """

    def __init__(self, max_depth=10, min_leaf=5):
        self.max_depth = max_depth
        self.min_leaf = min_leaf

    @staticmethod
    def _gini_sum(n_left, pos_left, n_right, pos_right):
        # size-weighted Gini impurity of both children (times the node size)
        gl = 2.0 * pos_left * (n_left - pos_left) / n_left
        gr = 2.0 * pos_right * (n_right - pos_right) / n_right
        return gl + gr

    def _best_split(self, X, y):
        n = y.size
        best = (None, None, 2.0 * y.sum() * (n - y.sum()) / n)
        total_pos = y.sum()
        lo = self.min_leaf
        if n < 2 * lo:
            return best
        for j in range(X.shape[1]):
            order = np.argsort(X[:, j], kind="stable")
            xs = X[order, j]
            cum = np.cumsum(y[order])
            # candidate split after position i (left holds i+1 items)
            i = np.arange(lo - 1, n - lo)
            valid = xs[i] < xs[i + 1]
            if not valid.any():
                continue
            i = i[valid]
            n_left = i + 1.0
            pos_left = cum[i]
            imp = self._gini_sum(n_left, pos_left, n - n_left, total_pos - pos_left)
            k = int(np.argmin(imp))
            if imp[k] < best[2] - 1e-12:
                best = (j, 0.5 * (xs[i[k]] + xs[i[k] + 1]), imp[k])
        return best

    def fit(self, X, y):
        X, y = check_X_y(X, y)
        y_idx = self._set_classes(y)
        self.n_features_in_ = X.shape[1]
        feature, threshold, left, right, value = [], [], [], [], []

        def grow(rows, depth):
            node = len(feature)
            yy = y_idx[rows]
            pos = int(yy.sum())
            neg = yy.size - pos
            value.append(1 if pos > neg else 0 if pos < neg else self.majority_)
            feature.append(-1)
            threshold.append(0.0)
            left.append(-1)
            right.append(-1)
            if depth >= self.max_depth or pos == 0 or neg == 0:
                return node
            j, t, _ = self._best_split(X[rows], yy)
            if j is None:
                return node
            mask = X[rows, j] <= t
            feature[node] = j
            threshold[node] = t
            left[node] = grow(rows[mask], depth + 1)
            right[node] = grow(rows[~mask], depth + 1)
            return node

        grow(np.arange(X.shape[0]), 0)
        self.feature_ = np.array(feature)
        self.threshold_ = np.array(threshold)
        self.left_ = np.array(left)
        self.right_ = np.array(right)
        self.value_ = np.array(value)
        return self

    def apply(self, X):
        """Index of the leaf reached by each row."""
        check_is_fitted(self, "feature_")
        X = check_array(X)
        node = np.zeros(X.shape[0], dtype=int)
        active = self.feature_[node] >= 0
        while active.any():
            idx = np.flatnonzero(active)
            nd = node[idx]
            go_left = X[idx, self.feature_[nd]] <= self.threshold_[nd]
            node[idx] = np.where(go_left, self.left_[nd], self.right_[nd])
            active = self.feature_[node] >= 0
        return node

    def predict(self, X):
        return self.classes_[self.value_[self.apply(X)]]

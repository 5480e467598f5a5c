"""Scikit-learn style front end to the hierarchical comparison."""
from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_array, check_is_fitted

from .exceptions import InputError
from .inference import map_fixed_point, next_delta_simplex, shrinkage_estimates
from .model import CrossValMatrix, HierarchicalTarget, HierConfig, sufficient_stats
from .sampler import init_params, run_chains


class HierarchicalComparison(BaseEstimator):
    """Compare two classifiers from cross-validation results on several data sets.

    ``fit`` takes a ``(q, runs * folds)`` array of fold accuracy differences
    (or a :class:`~hiercompare.model.CrossValMatrix`), samples the posterior of
    the hierarchical Student model and summarizes it. ``predict_proba``
    then returns the probabilities that left, rope or right is the most
    probable outcome on a new data set, and ``predict`` the decision at level
    ``alpha``.

    Parameters
    ----------
    rope : float, default=0.01
        Radius ``r`` of the region of practical equivalence ``[-r, r]``.
    rho : float or None, default=None
        Correlation between fold results; ``None`` uses ``1 / folds``.
    folds : int, default=10
        Folds per cross-validation run, used when ``X`` is a plain array.
    alpha : float, default=0.05
        A probability above ``1 - alpha`` decides the outcome.
    n_samples : int, default=4000
        Posterior draws used to count the most probable outcome.
    chains, warmup, draws : int
        Sampler settings (draws are per chain, after warmup).
    sigma_factor, sigma0_factor : float, default=1000
        Upper bounds of the uniform priors on ``sigma_i`` and ``sigma0`` as
        multiples of the mean row sd and of the sd of the row means.
    nu_prior : {"hierarchical", "gamma"}
        ``"gamma"`` fixes the degrees-of-freedom prior to Gamma(2, 0.1).
    random_state : int, default=0
    """

    def __init__(self, rope=0.01, rho=None, folds=10, alpha=0.05, n_samples=4000,
                 chains=4, warmup=2000, draws=1000, target_accept=0.44,
                 sigma_factor=1000.0, sigma0_factor=1000.0, nu_prior="hierarchical",
                 random_state=0):
        self.rope = rope
        self.rho = rho
        self.folds = folds
        self.alpha = alpha
        self.n_samples = n_samples
        self.chains = chains
        self.warmup = warmup
        self.draws = draws
        self.target_accept = target_accept
        self.sigma_factor = sigma_factor
        self.sigma0_factor = sigma0_factor
        self.nu_prior = nu_prior
        self.random_state = random_state

    def _config(self) -> HierConfig:
        if self.nu_prior not in ("hierarchical", "gamma"):
            raise ValueError("nu_prior must be 'hierarchical' or 'gamma'")
        return HierConfig(
            rope=self.rope, rho=self.rho, sigma_factor=self.sigma_factor,
            sigma0_factor=self.sigma0_factor,
            fixed_gamma=(2.0, 0.1) if self.nu_prior == "gamma" else None,
            chains=self.chains, warmup=self.warmup, draws=self.draws,
            target_accept=self.target_accept, seed=int(self.random_state),
            n_samples=self.n_samples, decision_alpha=self.alpha,
        )

    def _as_matrix(self, X) -> CrossValMatrix:
        if isinstance(X, CrossValMatrix):
            return X
        X = check_array(X, ensure_min_samples=2, ensure_min_features=2)
        if X.shape[1] % self.folds:
            raise InputError(f"{X.shape[1]} columns is not a multiple of folds={self.folds}")
        return CrossValMatrix(X, X.shape[1] // self.folds, self.folds)

    def fit(self, X, y=None):
        cv = self._as_matrix(X)
        if cv.q < 2:
            raise InputError("need results on at least two data sets")
        cfg = self._config()
        stats = sufficient_stats(cv)
        target = HierarchicalTarget(stats, cfg)
        seed = int(self.random_state)
        init_rng = np.random.default_rng([seed, 0])
        inits = [init_params(stats, cfg, init_rng) for _ in range(cfg.chains)]
        self.cv_ = cv
        self.stats_ = stats
        self.config_ = cfg
        self.rho_ = cfg.rho_for(stats)
        self.draws_ = run_chains(target, inits, cfg.chain_config())
        self.rope_report_ = next_delta_simplex(
            self.draws_, cfg.rope, cfg.n_samples, np.random.default_rng([seed, 1]), cfg.decision_alpha)
        self.shrinkage_ = shrinkage_estimates(self.draws_)
        self.shrinkage_.map = map_fixed_point(stats, self.rho_)
        self.converged_ = self.draws_.converged
        return self

    def predict_proba(self):
        """``[P(left), P(rope), P(right)]`` for a new data set."""
        check_is_fitted(self, "rope_report_")
        return self.rope_report_.probabilities

    def predict(self):
        """``"left"``, ``"rope"``, ``"right"`` or ``"none"``."""
        check_is_fitted(self, "rope_report_")
        return self.rope_report_.decision

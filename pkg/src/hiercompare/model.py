"""Hierarchical model of cross-validated accuracy differences.

The model, for data sets ``i = 1..q`` with ``n = runs * folds`` fold results::

    delta_i ~ t(delta0, sigma0, nu)
    sigma_i ~ Uniform(0, sigma_factor * s_bar)
    x_i     ~ MVN(1 * delta_i, Sigma_i)      # equicorrelated, variance sigma_i^2, correlation rho
    delta0  ~ Uniform(-1, 1)
    sigma0  ~ Uniform(0, sigma0_factor * s_xbar)
    nu      ~ Gamma(alpha, beta)             # rate parameterization
    alpha   ~ Uniform(0.5, 5),  beta ~ Uniform(0.05, 0.15)

The likelihood only needs the per-row mean and centered sum of squares, so a
log-posterior evaluation costs O(q) regardless of ``n``.
"""
from __future__ import annotations

import math

from dataclasses import dataclass, field
from typing import Optional, Tuple

import numpy as np

from .exceptions import DomainError, InputError
from .special import _student_t_logpdf_unchecked, gamma_logpdf

SIGMA_FLOOR = 1e-6
_LOG_2PI = np.log(2.0 * np.pi)
HYPER_NAMES = ("delta0", "sigma0", "nu", "alpha", "beta")


@dataclass(frozen=True)
class CrossValMatrix:
    """Per-fold accuracy differences, one row per data set (run-major columns)."""

    diffs: np.ndarray
    runs: int
    folds: int
    names: Tuple[str, ...] = ()

    def __post_init__(self):
        diffs = np.array(self.diffs, dtype=float)
        if diffs.ndim != 2 or diffs.size == 0:
            raise InputError("diffs must be a non-empty 2-D array (data sets x folds)")
        if self.runs < 1 or self.folds < 1:
            raise InputError("runs and folds must be positive")
        if diffs.shape[1] != self.runs * self.folds:
            raise InputError(
                f"row length {diffs.shape[1]} != runs * folds = {self.runs * self.folds}"
            )
        if not np.all(np.isfinite(diffs)):
            raise InputError("diffs contains non-finite values")
        if np.any(np.abs(diffs) > 1.0):
            raise InputError("accuracy differences must lie in [-1, 1]")
        names = tuple(self.names) if len(self.names) else tuple(f"ds{i + 1}" for i in range(diffs.shape[0]))
        if len(names) != diffs.shape[0]:
            raise InputError("one name per data set is required")
        if len(set(names)) != len(names):
            raise InputError("data set names must be unique")
        diffs.setflags(write=False)
        object.__setattr__(self, "diffs", diffs)
        object.__setattr__(self, "names", names)

    @property
    def q(self) -> int:
        return self.diffs.shape[0]

    @property
    def n(self) -> int:
        return self.diffs.shape[1]


@dataclass(frozen=True)
class SufficientStats:
    mean: np.ndarray
    ss: np.ndarray
    n: int
    folds: int
    s_bar: float
    s_xbar: float

    @property
    def q(self) -> int:
        return self.mean.shape[0]

    @property
    def sd(self) -> np.ndarray:
        return np.sqrt(self.ss / (self.n - 1))


def sufficient_stats(data: CrossValMatrix) -> SufficientStats:
    """Row means, centered sums of squares and the pooled spread summaries.

    ``s_bar`` averages the row standard deviations after flooring each at
    ``SIGMA_FLOOR``; ``s_xbar`` is the sample standard deviation of the row means.
    """
    x = data.diffs
    if x.size == 0:
        raise InputError("empty matrix")
    mean = x.mean(axis=1)
    ss = ((x - mean[:, None]) ** 2).sum(axis=1)
    n = x.shape[1]
    sd = np.sqrt(ss / (n - 1)) if n > 1 else np.zeros_like(ss)
    s_bar = float(np.maximum(sd, SIGMA_FLOOR).mean())
    s_xbar = float(mean.std(ddof=1)) if mean.size > 1 else 0.0
    return SufficientStats(mean=mean, ss=ss, n=n, folds=data.folds, s_bar=s_bar, s_xbar=s_xbar)


@dataclass(frozen=True)
class HierConfig:
    """Rope, correlation, prior hyperparameters and sampler settings.

    ``rho=None`` means ``1 / folds``. ``fixed_gamma=(a, b)`` pins the Gamma
    prior on ``nu`` instead of sampling its shape and rate.
    """

    rope: float = 0.01
    rho: Optional[float] = None
    delta0_bounds: Tuple[float, float] = (-1.0, 1.0)
    sigma_factor: float = 1000.0
    sigma0_factor: float = 1000.0
    alpha_bounds: Tuple[float, float] = (0.5, 5.0)
    beta_bounds: Tuple[float, float] = (0.05, 0.15)
    fixed_gamma: Optional[Tuple[float, float]] = None
    chains: int = 4
    warmup: int = 2000
    draws: int = 1000
    target_accept: float = 0.44
    seed: int = 0
    n_samples: int = 4000
    decision_alpha: float = 0.05

    def __post_init__(self):
        if not self.rope > 0:
            raise DomainError("rope radius must be > 0")
        if self.rho is not None and not 0.0 <= self.rho < 1.0:
            raise DomainError("rho must lie in [0, 1)")
        for name in ("delta0_bounds", "alpha_bounds", "beta_bounds"):
            lo, hi = getattr(self, name)
            if not lo < hi:
                raise DomainError(f"{name}: lower bound must be below upper bound")
        if self.alpha_bounds[0] <= 0 or self.beta_bounds[0] <= 0:
            raise DomainError("Gamma hyperparameter bounds must be positive")
        if self.sigma_factor <= 0 or self.sigma0_factor <= 0:
            raise DomainError("prior bound factors must be positive")
        if self.fixed_gamma is not None and min(self.fixed_gamma) <= 0:
            raise DomainError("fixed Gamma parameters must be positive")
        if not 0.0 < self.decision_alpha < 1.0:
            raise DomainError("decision_alpha must lie in (0, 1)")
        if self.n_samples < 1:
            raise DomainError("n_samples must be positive")

    def rho_for(self, stats: SufficientStats) -> float:
        return self.rho if self.rho is not None else 1.0 / stats.folds

    def sigma_upper(self, stats: SufficientStats) -> float:
        return self.sigma_factor * stats.s_bar

    def sigma0_upper(self, stats: SufficientStats) -> float:
        return self.sigma0_factor * max(stats.s_xbar, SIGMA_FLOOR)

    def chain_config(self):
        from .sampler import ChainConfig

        return ChainConfig(
            chains=self.chains,
            warmup=self.warmup,
            draws=self.draws,
            target_accept=self.target_accept,
            seed=self.seed,
        )


@dataclass
class HierParams:
    delta0: float
    sigma0: float
    nu: float
    alpha: float
    beta: float
    delta: np.ndarray = field(default_factory=lambda: np.zeros(0))
    sigma: np.ndarray = field(default_factory=lambda: np.zeros(0))

    def to_vector(self) -> np.ndarray:
        return np.concatenate(
            [[self.delta0, self.sigma0, self.nu, self.alpha, self.beta],
             np.asarray(self.delta, float), np.asarray(self.sigma, float)]
        )

    @classmethod
    def from_vector(cls, theta) -> "HierParams":
        theta = np.asarray(theta, dtype=float)
        q = (theta.size - 5) // 2
        if theta.size != 5 + 2 * q:
            raise InputError("parameter vector must have length 5 + 2q")
        return cls(*theta[:5], delta=theta[5:5 + q].copy(), sigma=theta[5 + q:].copy())


def param_names(q: int) -> Tuple[str, ...]:
    return HYPER_NAMES + tuple(f"delta[{i}]" for i in range(q)) + tuple(f"sigma[{i}]" for i in range(q))


def _lik_terms(mean, ss, n, delta, sigma, rho):
    var = sigma * sigma
    logdet = n * np.log(var) + (n - 1) * np.log1p(-rho) + np.log1p((n - 1) * rho)
    d = mean - delta
    # 1'Sigma^-1 1 = n / (sigma^2 (1 + (n-1) rho)); the residual part sees sigma^2 (1 - rho)
    quad = ss / (var * (1.0 - rho)) + n * d * d / (var * (1.0 + (n - 1) * rho))
    return -0.5 * (n * _LOG_2PI + logdet + quad)


def log_lik_equicorr(xbar, ss, n, delta, sigma, rho):
    """Log-density of equicorrelated MVN data, from the row mean and centered SS.

    Vectorizes over array arguments.
    """
    if np.any(~(np.asarray(sigma) > 0)):
        raise DomainError("sigma must be > 0")
    if not 0.0 <= rho < 1.0:
        raise DomainError("rho must lie in [0, 1)")
    if n < 2:
        raise DomainError("need n >= 2 observations")
    out = _lik_terms(np.asarray(xbar, float), np.asarray(ss, float), n, delta, sigma, rho)
    return float(out) if np.ndim(out) == 0 else out


def _gamma_logpdf_scalar(x, shape, rate):
    if not x > 0:
        return -math.inf
    return shape * math.log(rate) - math.lgamma(shape) + (shape - 1.0) * math.log(x) - rate * x


def _uniform_logpdf(x, lo, hi):
    return -np.log(hi - lo) if lo < x < hi else -np.inf


def log_prior(p: HierParams, cfg: HierConfig, stats: SufficientStats) -> float:
    delta = np.asarray(p.delta, float)
    sigma = np.asarray(p.sigma, float)
    total = _uniform_logpdf(p.delta0, *cfg.delta0_bounds)
    total += _uniform_logpdf(p.sigma0, 0.0, cfg.sigma0_upper(stats))
    if cfg.fixed_gamma is None:
        total += _uniform_logpdf(p.alpha, *cfg.alpha_bounds)
        total += _uniform_logpdf(p.beta, *cfg.beta_bounds)
    elif (p.alpha, p.beta) != tuple(cfg.fixed_gamma):
        return -np.inf
    if not np.isfinite(total) or not p.nu > 0:
        return -np.inf
    total += float(gamma_logpdf(p.nu, p.alpha, p.beta))
    sig_hi = cfg.sigma_upper(stats)
    if np.any(sigma < SIGMA_FLOOR) or np.any(sigma >= sig_hi):
        return -np.inf
    total += -sigma.size * np.log(sig_hi)
    total += float(np.sum(_student_t_logpdf_unchecked(delta, p.delta0, p.sigma0, p.nu)))
    return float(total)


def log_posterior(p: HierParams, stats: SufficientStats, cfg: HierConfig) -> float:
    """Unnormalized log-posterior; ``-inf`` outside the prior support."""
    q = stats.q
    if np.size(p.delta) != q or np.size(p.sigma) != q:
        raise InputError(f"expected {q} delta and sigma entries")
    lp = log_prior(p, cfg, stats)
    if not np.isfinite(lp):
        return -np.inf
    rho = cfg.rho_for(stats)
    ll = _lik_terms(stats.mean, stats.ss, stats.n, np.asarray(p.delta, float), np.asarray(p.sigma, float), rho)
    return float(lp + ll.sum())


def grad_log_posterior_delta(p: HierParams, stats: SufficientStats, cfg: HierConfig) -> np.ndarray:
    """Analytic partial derivatives of the log-posterior in each ``delta_i``."""
    delta = np.asarray(p.delta, float)
    sigma = np.asarray(p.sigma, float)
    rho = cfg.rho_for(stats)
    z = (delta - p.delta0) / p.sigma0
    prior_score = -(p.nu + 1.0) * z / (p.sigma0 * (p.nu + z * z))
    lik_score = stats.n * (stats.mean - delta) / (sigma ** 2 * (1.0 + (stats.n - 1) * rho))
    return prior_score + lik_score


class HierarchicalTarget:
    """Log-posterior split into conditionally independent update blocks.

    Blocks are ``delta0``, ``sigma0``, ``nu``, ``alpha``, ``beta`` and then the
    vectors ``delta_1..q`` and ``sigma_1..q``. ``local_logp`` returns, per
    coordinate of a block, every log-posterior term that involves it; the
    coordinates of a vector block do not interact given the other blocks, so
    they can be updated in one vectorized Metropolis step.
    """

    def __init__(self, stats: SufficientStats, cfg: HierConfig):
        if stats.q < 1:
            raise InputError("need at least one data set")
        self.stats = stats
        self.cfg = cfg
        self.q = q = stats.q
        self.dim = 5 + 2 * q
        self.rho = cfg.rho_for(stats)
        self.sig_hi = cfg.sigma_upper(stats)
        self.sig0_hi = cfg.sigma0_upper(stats)
        self.names = param_names(q)
        self.positive = np.zeros(self.dim, dtype=bool)
        self.positive[[1, 2]] = True
        self.positive[5 + q:] = True
        blocks = [np.array([0]), np.array([1]), np.array([2])]
        if cfg.fixed_gamma is None:
            blocks += [np.array([3]), np.array([4])]
        blocks += [np.arange(5, 5 + q), np.arange(5 + q, 5 + 2 * q)]
        self.blocks = blocks

    def logp(self, theta) -> float:
        """Log-posterior up to the additive constant of the uniform priors."""
        q, st, cfg = self.q, self.stats, self.cfg
        delta0, sigma0, nu, alpha, beta = theta[:5]
        delta = theta[5:5 + q]
        sigma = theta[5 + q:]
        lo, hi = cfg.delta0_bounds
        if not (lo < delta0 < hi and 0.0 < sigma0 < self.sig0_hi and nu > 0):
            return -np.inf
        if cfg.fixed_gamma is None:
            if not (cfg.alpha_bounds[0] < alpha < cfg.alpha_bounds[1]
                    and cfg.beta_bounds[0] < beta < cfg.beta_bounds[1]):
                return -np.inf
        if np.any(sigma < SIGMA_FLOOR) or np.any(sigma >= self.sig_hi):
            return -np.inf
        return float(
            _gamma_logpdf_scalar(nu, alpha, beta)
            + self._student_sum(delta, delta0, sigma0, nu)
            + _lik_terms(st.mean, st.ss, st.n, delta, sigma, self.rho).sum()
        )

    def _shift(self, theta, eps):
        """Move ``delta0`` and every ``delta_i`` by the same amount."""
        out = theta.copy()
        out[0] += eps
        out[5:5 + self.q] += eps
        return out, 0.0

    def _scale(self, theta, eps):
        """Stretch ``sigma0`` and the deviations ``delta_i - delta0`` by ``exp(eps)``."""
        out = theta.copy()
        factor = np.exp(eps)
        out[1] *= factor
        out[5:5 + self.q] = theta[0] + (theta[5:5 + self.q] - theta[0]) * factor
        return out, (self.q + 1) * eps

    @property
    def joint_moves(self):
        st = self.stats
        shift0 = max(st.s_xbar, SIGMA_FLOOR) / np.sqrt(self.q)
        return [(self._shift, shift0), (self._scale, 0.1)]

    def initial_scales(self, theta) -> np.ndarray:
        """Proposal scales in the sampler's coordinates (log for positive ones)."""
        q, st = self.q, self.stats
        sigma = theta[5 + q:]
        inflate = (1.0 + (st.n - 1) * self.rho) / st.n
        scales = np.empty(self.dim)
        scales[0] = max(st.s_xbar, SIGMA_FLOOR) / np.sqrt(q)
        scales[1] = 0.3
        scales[2] = 0.5
        scales[3] = 1.0
        scales[4] = 0.03
        scales[5:5 + q] = np.maximum(sigma, SIGMA_FLOOR) * np.sqrt(inflate)
        scales[5 + q:] = 1.0 / np.sqrt(2.0 * st.n)
        return scales

    @staticmethod
    def _student_terms(delta, delta0, sigma0, nu):
        z = (delta - delta0) / sigma0
        const = math.lgamma(0.5 * (nu + 1.0)) - math.lgamma(0.5 * nu) - 0.5 * math.log(nu * math.pi) - math.log(sigma0)
        return const - 0.5 * (nu + 1.0) * np.log1p(z * z / nu)

    def _student_sum(self, delta, delta0, sigma0, nu):
        return float(self._student_terms(delta, delta0, sigma0, nu).sum())

    def local_logp(self, theta, b: int) -> np.ndarray:
        q = self.q
        idx = self.blocks[b]
        first = int(idx[0])
        delta0, sigma0, nu, alpha, beta = theta[:5]
        delta = theta[5:5 + q]
        sigma = theta[5 + q:]
        if first == 0:
            lo, hi = self.cfg.delta0_bounds
            if not lo < delta0 < hi:
                return np.array([-np.inf])
            return np.array([self._student_sum(delta, delta0, sigma0, nu)])
        if first == 1:
            if not 0.0 < sigma0 < self.sig0_hi:
                return np.array([-np.inf])
            return np.array([self._student_sum(delta, delta0, sigma0, nu)])
        if first == 2:
            if not nu > 0:
                return np.array([-np.inf])
            return np.array([self._student_sum(delta, delta0, sigma0, nu) + _gamma_logpdf_scalar(nu, alpha, beta)])
        if first == 3:
            lo, hi = self.cfg.alpha_bounds
            if not lo < alpha < hi:
                return np.array([-np.inf])
            return np.array([_gamma_logpdf_scalar(nu, alpha, beta)])
        if first == 4:
            lo, hi = self.cfg.beta_bounds
            if not lo < beta < hi:
                return np.array([-np.inf])
            return np.array([_gamma_logpdf_scalar(nu, alpha, beta)])
        st = self.stats
        if first == 5:
            return self._student_terms(delta, delta0, sigma0, nu) + _lik_terms(
                st.mean, st.ss, st.n, delta, sigma, self.rho)
        out = _lik_terms(st.mean, st.ss, st.n, delta, sigma, self.rho)
        bad = (sigma < SIGMA_FLOOR) | (sigma >= self.sig_hi)
        return np.where(bad, -np.inf, out)

"""Adaptive Metropolis-within-Gibbs sampling and convergence diagnostics.

Each coordinate gets a Gaussian random-walk proposal in an unconstrained
coordinate system (identity, or log for positive parameters, with the
Jacobian included). Targets may also offer ``joint_moves``: symmetric
one-parameter group moves ``theta -> g_eps(theta)`` returning the log
Jacobian, used to cross strongly correlated ridges in one step. Proposal scales are tuned during warmup with a
Robbins-Monro rule on the log scale toward a target acceptance rate and are
frozen afterwards.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from .exceptions import DomainError, SetupError
from .model import HierConfig, HierParams, SufficientStats, SIGMA_FLOOR

logger = logging.getLogger(__name__)

RHAT_THRESHOLD = 1.1


@dataclass(frozen=True)
class ChainConfig:
    chains: int = 4
    warmup: int = 2000
    draws: int = 1000
    target_accept: float = 0.44
    seed: int = 0
    thin: int = 1

    def __post_init__(self):
        if self.chains < 2:
            raise DomainError("need at least 2 chains")
        if self.warmup < 100 or self.draws < 100:
            raise DomainError("warmup and draws must each be >= 100")
        if not 0.0 < self.target_accept < 1.0:
            raise DomainError("target_accept must lie in (0, 1)")
        if self.thin < 1:
            raise DomainError("thin must be >= 1")


@dataclass
class PosteriorDraws:
    """Retained draws with shape ``(chains, draws, dim)`` plus diagnostics."""

    samples: np.ndarray
    names: tuple
    rhat: np.ndarray
    ess: np.ndarray
    acceptance: np.ndarray
    step_sizes: Optional[np.ndarray] = None
    move_acceptance: Optional[np.ndarray] = None

    @property
    def matrix(self) -> np.ndarray:
        """Draws stacked chain by chain, ``(chains * draws, dim)``."""
        c, d, p = self.samples.shape
        return self.samples.reshape(c * d, p)

    def column(self, name: str) -> np.ndarray:
        return self.matrix[:, self.names.index(name)]

    @property
    def converged(self) -> bool:
        return bool(np.all(self.rhat <= RHAT_THRESHOLD))


class _CallableTarget:
    """Adapts a plain ``logpost(theta) -> float`` to one block per coordinate."""

    def __init__(self, logpost: Callable, dim: int, positive=None):
        self._f = logpost
        self.dim = dim
        self.blocks = [np.array([i]) for i in range(dim)]
        self.positive = np.zeros(dim, bool) if positive is None else np.asarray(positive, bool)
        self.names = tuple(f"x[{i}]" for i in range(dim))

    def local_logp(self, theta, b):
        return np.array([self._f(theta)], dtype=float)

    def initial_scales(self, theta):
        return np.ones(self.dim)


def _as_vector(init) -> np.ndarray:
    if isinstance(init, HierParams):
        return init.to_vector()
    return np.atleast_1d(np.asarray(init, dtype=float)).copy()


def _safe(v):
    v = np.asarray(v, dtype=float)
    return np.where(np.isnan(v), -np.inf, v)


def _nan_to_ninf(x: float) -> float:
    return -np.inf if x != x else x


def _run_one(target, theta0, cc: ChainConfig, rng, scales0):
    dim = target.dim
    pos = target.positive
    theta = theta0.copy()
    u = np.where(pos, np.log(np.where(pos, theta, 1.0)), theta)
    log_step = np.log(scales0)
    n_keep = cc.draws
    out = np.empty((n_keep, dim))
    accepted = np.zeros(dim)
    post_iters = cc.draws * cc.thin
    total = cc.warmup + post_iters
    moves = list(getattr(target, "joint_moves", []))
    move_step = np.log([m[1] for m in moves]) if moves else np.zeros(0)
    move_acc = np.zeros(len(moves))
    k = 0
    for it in range(total):
        warm = it < cc.warmup
        for b, idx in enumerate(target.blocks):
            cur_local = _safe(target.local_logp(theta, b)) + np.where(pos[idx], u[idx], 0.0)
            u_prop = u[idx] + np.exp(log_step[idx]) * rng.standard_normal(idx.size)
            old_u = u[idx].copy()
            old_theta = theta[idx].copy()
            u[idx] = u_prop
            theta[idx] = np.where(pos[idx], np.exp(u_prop), u_prop)
            prop_local = _safe(target.local_logp(theta, b)) + np.where(pos[idx], u_prop, 0.0)
            log_ratio = prop_local - cur_local
            accept = np.log(rng.random(idx.size)) < log_ratio
            reject = ~accept
            if reject.any():
                u[idx[reject]] = old_u[reject]
                theta[idx[reject]] = old_theta[reject]
            if warm:
                gain = (it + 1.0) ** -0.6
                log_step[idx] += gain * (accept - cc.target_accept)
            else:
                accepted[idx] += accept
        for j, (move, _) in enumerate(moves):
            eps = np.exp(move_step[j]) * rng.standard_normal()
            prop, log_jac = move(theta, eps)
            ok = np.log(rng.random()) < _nan_to_ninf(target.logp(prop)) - _nan_to_ninf(target.logp(theta)) + log_jac
            if ok:
                theta = prop
                u = np.where(pos, np.log(np.where(pos, theta, 1.0)), theta)
            if warm:
                move_step[j] += (it + 1.0) ** -0.6 * (ok - cc.target_accept)
            else:
                move_acc[j] += ok
        if not warm and (it - cc.warmup) % cc.thin == cc.thin - 1:
            out[k] = theta
            k += 1
    return out, accepted / post_iters, np.exp(log_step), move_acc / post_iters


def run_chains(logpost, inits: Sequence, cc: ChainConfig, positive=None, scales=None) -> PosteriorDraws:
    """Run ``cc.chains`` independent chains and compute diagnostics.

    ``logpost`` is either a callable on the parameter vector or a block target
    such as :class:`~hiercompare.model.HierarchicalTarget`. ``inits`` holds one
    starting point per chain (vectors or :class:`HierParams`). Chain ``c`` uses
    the generator seeded with ``cc.seed + c``.
    """
    if len(inits) != cc.chains:
        raise SetupError(f"need {cc.chains} initial points, got {len(inits)}")
    starts = [_as_vector(x) for x in inits]
    dim = starts[0].size
    if hasattr(logpost, "local_logp"):
        target = logpost
    else:
        target = _CallableTarget(logpost, dim, positive)
    samples, acc, steps, move_rates = [], [], [], []
    for c, theta0 in enumerate(starts):
        if theta0.size != dim:
            raise SetupError("initial points differ in dimension")
        if np.any(target.positive & ~(theta0 > 0)):
            raise SetupError(f"chain {c}: positive parameter initialized at a non-positive value")
        for b in range(len(target.blocks)):
            if not np.all(np.isfinite(target.local_logp(theta0, b))):
                raise SetupError(f"chain {c}: log-posterior is not finite at the initial point")
        s0 = np.asarray(scales, float) if scales is not None else target.initial_scales(theta0)
        rng = np.random.default_rng(cc.seed + c)
        draws, rate, step, mrate = _run_one(target, theta0, cc, rng, s0)
        move_rates.append(mrate)
        samples.append(draws)
        acc.append(rate)
        steps.append(step)
    samples = np.stack(samples)
    rhat = r_hat(samples)
    result = PosteriorDraws(
        samples=samples,
        names=tuple(target.names),
        rhat=rhat,
        ess=ess(samples),
        acceptance=np.mean(acc, axis=0),
        step_sizes=np.stack(steps),
        move_acceptance=np.mean(move_rates, axis=0),
    )
    if not result.converged:
        bad = [n for n, r in zip(result.names, rhat) if not r <= RHAT_THRESHOLD]
        logger.warning("R-hat above %.2f for %d parameter(s): %s", RHAT_THRESHOLD, len(bad), ", ".join(bad[:5]))
    return result


def _as_3d(samples) -> np.ndarray:
    x = np.asarray(samples, dtype=float)
    if x.ndim == 2:
        x = x[:, :, None]
    if x.ndim != 3:
        raise DomainError("expected draws shaped (chains, draws[, params])")
    if x.shape[0] < 2 or x.shape[1] < 4:
        raise DomainError("diagnostics need >= 2 chains with >= 4 draws each")
    return x


def r_hat(samples) -> np.ndarray:
    """Split-R-hat per parameter for draws shaped ``(chains, draws[, params])``.

    A parameter that is constant within and across chains gets R-hat 1.
    """
    x = _as_3d(samples)
    half = x.shape[1] // 2
    split = np.concatenate([x[:, :half], x[:, x.shape[1] - half:]], axis=0)
    m, n = split.shape[:2]
    means = split.mean(axis=1)
    w = split.var(axis=1, ddof=1).mean(axis=0)
    b = n * means.var(axis=0, ddof=1)
    var_plus = (n - 1) / n * w + b / n
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.sqrt(var_plus / w)
    out = np.where(w > 0, out, np.where(b > 0, np.inf, 1.0))
    return out


def _autocov(x: np.ndarray) -> np.ndarray:
    """Autocovariance along axis 1 of ``(chains, draws)`` via FFT (biased)."""
    n = x.shape[1]
    centered = x - x.mean(axis=1, keepdims=True)
    size = 1 << (2 * n - 1).bit_length()
    f = np.fft.rfft(centered, n=size, axis=1)
    return np.fft.irfft(f * np.conj(f), n=size, axis=1)[:, :n] / n


def ess(samples) -> np.ndarray:
    """Effective sample size per parameter with Geyer's initial monotone sequence.

    Clipped to ``[1, chains * draws]``; constant parameters get the full count.
    """
    x = _as_3d(samples)
    m, n, p = x.shape
    total = m * n
    out = np.empty(p)
    for j in range(p):
        chains = x[:, :, j]
        acov = _autocov(chains)
        w = (acov[:, 0] * n / (n - 1)).mean()
        var_plus = w * (n - 1) / n + chains.mean(axis=1).var(ddof=1)
        if not var_plus > 0:
            out[j] = total
            continue
        rho = 1.0 - (w - acov.mean(axis=0)) / var_plus
        rho[0] = 1.0
        tau = -1.0
        prev = np.inf
        for t in range(0, n - 1, 2):
            pair = rho[t] + rho[t + 1]
            if pair < 0:
                break
            pair = min(pair, prev)
            prev = pair
            tau += 2.0 * pair
        out[j] = total / tau if tau > 0 else total
    return np.clip(out, 1.0, total)


def init_params(stats: SufficientStats, cfg: HierConfig, rng, jitter: float = 1.0) -> HierParams:
    """Data-driven starting point, with random perturbation scaled by ``jitter``."""
    q = stats.q
    sd = np.maximum(stats.sd, SIGMA_FLOOR)
    lo, hi = cfg.delta0_bounds
    eps = 1e-9 * (hi - lo)
    delta0 = float(np.clip(stats.mean.mean(), lo + eps, hi - eps))
    sigma0 = max(stats.s_xbar, SIGMA_FLOOR)
    if cfg.fixed_gamma is None:
        alpha = 0.5 * sum(cfg.alpha_bounds)
        beta = 0.5 * sum(cfg.beta_bounds)
    else:
        alpha, beta = cfg.fixed_gamma
    nu = 5.0
    delta = stats.mean.copy()
    sigma = sd.copy()
    if jitter > 0:
        rho = cfg.rho_for(stats)
        se = sd * np.sqrt((1.0 + (stats.n - 1) * rho) / stats.n)
        delta = delta + jitter * 0.1 * se * rng.standard_normal(q)
        delta0 = float(np.clip(delta0 + jitter * 0.1 * sigma0 / np.sqrt(q) * rng.standard_normal(), lo + eps, hi - eps))
        sigma = sigma * np.exp(jitter * 0.05 * rng.standard_normal(q))
        sigma0 = sigma0 * float(np.exp(jitter * 0.1 * rng.standard_normal()))
        nu = nu * float(np.exp(jitter * 0.1 * rng.standard_normal()))
        if cfg.fixed_gamma is None:
            a_lo, a_hi = cfg.alpha_bounds
            b_lo, b_hi = cfg.beta_bounds
            alpha = float(alpha + jitter * 0.1 * (a_hi - a_lo) * rng.uniform(-1, 1))
            beta = float(beta + jitter * 0.1 * (b_hi - b_lo) * rng.uniform(-1, 1))
    sigma = np.clip(sigma, SIGMA_FLOOR, 0.5 * cfg.sigma_upper(stats))
    sigma0 = min(sigma0, 0.5 * cfg.sigma0_upper(stats))
    return HierParams(delta0, sigma0, nu, alpha, beta, delta=delta, sigma=sigma)

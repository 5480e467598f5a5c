import numpy as np
import pytest

from hiercompare.exceptions import DomainError, SetupError
from hiercompare.model import CrossValMatrix, HierarchicalTarget, HierConfig, sufficient_stats
from hiercompare.sampler import ChainConfig, ess, init_params, r_hat, run_chains

# conjugate normal-normal: x_j ~ N(theta, 1), theta ~ N(2, 1.5^2)
X = np.array([3.1, 2.4, 3.8, 2.9, 3.3])
PRIOR_MU, PRIOR_SD = 2.0, 1.5
POST_VAR = 1.0 / (1.0 / PRIOR_SD ** 2 + X.size)
POST_MEAN = POST_VAR * (PRIOR_MU / PRIOR_SD ** 2 + X.sum())


def conjugate_logp(theta):
    t = theta[0]
    return -0.5 * ((t - PRIOR_MU) / PRIOR_SD) ** 2 - 0.5 * np.sum((X - t) ** 2)


def test_conjugate_normal_recovered():
    cc = ChainConfig(chains=4, warmup=1000, draws=10_000, seed=3)
    d = run_chains(conjugate_logp, [[0.0], [1.0], [4.0], [6.0]], cc)
    x = d.matrix[:, 0]
    assert x.mean() == pytest.approx(POST_MEAN, rel=0.02)
    assert x.std() == pytest.approx(np.sqrt(POST_VAR), rel=0.02)
    assert d.rhat.max() < 1.05
    assert 0.3 < d.acceptance[0] < 0.6


def test_positive_parameter_sampled_in_log_space():
    # Gamma(3, 2) target on (0, inf); the log-coordinate Jacobian must be applied
    def logp(theta):
        x = theta[0]
        return 2.0 * np.log(x) - 2.0 * x if x > 0 else -np.inf

    cc = ChainConfig(chains=4, warmup=1000, draws=5000, seed=1)
    d = run_chains(logp, [[1.0]] * 4, cc, positive=[True])
    assert d.matrix[:, 0].mean() == pytest.approx(1.5, rel=0.03)
    assert d.matrix[:, 0].var() == pytest.approx(0.75, rel=0.08)


def test_identical_seeds_bitwise_identical():
    cc = ChainConfig(chains=2, warmup=200, draws=300, seed=9)
    a = run_chains(conjugate_logp, [[0.0], [1.0]], cc)
    b = run_chains(conjugate_logp, [[0.0], [1.0]], cc)
    assert np.array_equal(a.samples, b.samples)
    c = run_chains(conjugate_logp, [[0.0], [1.0]], ChainConfig(chains=2, warmup=200, draws=300, seed=10))
    assert not np.array_equal(a.samples, c.samples)


def test_setup_errors():
    cc = ChainConfig(chains=2, warmup=100, draws=100)
    with pytest.raises(SetupError):
        run_chains(conjugate_logp, [[0.0]], cc)
    with pytest.raises(SetupError):
        run_chains(lambda t: -np.inf, [[0.0], [0.0]], cc)
    with pytest.raises(SetupError):
        run_chains(conjugate_logp, [[-1.0], [1.0]], cc, positive=[True])
    with pytest.raises(DomainError):
        ChainConfig(chains=1)
    with pytest.raises(DomainError):
        ChainConfig(warmup=10)


def test_rhat_detects_separated_chains(rng):
    good = rng.normal(size=(4, 1000))
    bad = good + np.arange(4)[:, None]
    assert r_hat(good)[0] < 1.01
    assert r_hat(bad)[0] > 1.5
    const = np.ones((4, 100))
    assert r_hat(const)[0] == 1.0
    assert r_hat(const + np.arange(4)[:, None])[0] == np.inf


def test_rhat_detects_trend_within_chain(rng):
    # split chains catch drift that full-chain R-hat would miss
    x = rng.normal(size=(4, 1000)) + np.linspace(0, 3, 1000)
    assert r_hat(x)[0] > 1.1


def test_ess_iid_and_ar1(rng):
    iid = rng.normal(size=(4, 5000))
    assert ess(iid)[0] == pytest.approx(20_000, rel=0.1)
    phi = 0.8
    z = rng.normal(size=(4, 20_000))
    ar = np.empty_like(z)
    ar[:, 0] = z[:, 0]
    for t in range(1, z.shape[1]):
        ar[:, t] = phi * ar[:, t - 1] + np.sqrt(1 - phi ** 2) * z[:, t]
    expected = ar.size * (1 - phi) / (1 + phi)
    assert ess(ar)[0] == pytest.approx(expected, rel=0.15)


def test_ess_bounds(rng):
    const = np.zeros((2, 50))
    assert ess(const)[0] == 100
    anti = np.tile([1.0, -1.0], (2, 50)) + 1e-3 * rng.normal(size=(2, 100))
    assert 1 <= ess(anti)[0] <= 200
    with pytest.raises(DomainError):
        ess(np.zeros((1, 10)))


def test_hierarchical_target_mixes(rng):
    deltas = rng.normal(0.01, 0.02, 20)
    diffs = np.clip(deltas[:, None] + rng.normal(0, 0.03, (20, 50)), -1, 1)
    s = sufficient_stats(CrossValMatrix(diffs, 5, 10))
    cfg = HierConfig(warmup=1000, draws=1000)
    inits = [init_params(s, cfg, rng) for _ in range(cfg.chains)]
    d = run_chains(HierarchicalTarget(s, cfg), inits, cfg.chain_config())
    assert d.converged
    assert d.samples.shape == (4, 1000, 45)
    assert d.ess[0] > 100
    assert -1 < d.column("delta0").min() and d.column("delta0").max() < 1
    assert d.column("sigma0").min() > 0


def test_init_params_in_support(small_cv, rng):
    s = sufficient_stats(small_cv)
    for cfg in (HierConfig(), HierConfig(fixed_gamma=(2.0, 0.1))):
        t = HierarchicalTarget(s, cfg)
        for _ in range(20):
            assert np.isfinite(t.logp(init_params(s, cfg, rng, jitter=3.0).to_vector()))

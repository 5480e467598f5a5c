import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate, stats

from hiercompare.baselines import (
    TestResult,
    bayes_correlated_t_test,
    correlated_standard_error,
    correlated_t_test,
    signed_rank_test,
)
from hiercompare.exceptions import DegenerateInputError, DomainError, InputError

ROW = np.array([0.02, 0.01, 0.03, -0.01, 0.00, 0.04, 0.02, 0.01, 0.03, 0.02])


def enumerate_signed_rank_p(x):
    """Two-sided p-value by listing all sign patterns of the average ranks."""
    x = x[x != 0]
    ranks = stats.rankdata(np.abs(x))
    t_obs = ranks[x > 0].sum()
    sums = np.array([sum(r for r, s in zip(ranks, signs) if s)
                     for signs in itertools.product([0, 1], repeat=x.size)])
    lower = np.mean(sums <= t_obs + 1e-9)
    upper = np.mean(sums >= t_obs - 1e-9)
    return min(1.0, 2 * min(lower, upper))


def test_correlated_t_by_hand():
    rho = 0.1
    n = ROW.size
    se = ROW.std(ddof=1) * math.sqrt(1 / n + rho / (1 - rho))
    t = ROW.mean() / se
    res = correlated_t_test(ROW, rho)
    assert res.statistic == pytest.approx(t, abs=1e-12)
    assert res.dof == n - 1
    assert res.p_value == pytest.approx(2 * stats.t.sf(abs(t), n - 1), abs=1e-12)


def test_rho_changes_standard_error_by_documented_factor():
    s, n = 0.02, 100
    factor = correlated_standard_error(s, n, 0.2) / correlated_standard_error(s, n, 0.1)
    assert factor == pytest.approx(math.sqrt((1 / n + 0.2 / 0.8) / (1 / n + 0.1 / 0.9)))
    assert correlated_standard_error(s, n, 0.0) == pytest.approx(s / math.sqrt(n))


def test_zero_mean_gives_p_one_and_symmetric_rope():
    x = np.array([0.01, -0.01, 0.02, -0.02])
    assert correlated_t_test(x, 0.1).p_value == pytest.approx(1.0)
    p = bayes_correlated_t_test(x, 0.1, 0.01)
    assert p.left == pytest.approx(p.right, abs=1e-15)
    assert sum(p) == pytest.approx(1.0, abs=1e-12)


def test_bayes_correlated_t_matches_quadrature():
    rho, r = 0.1, 0.01
    n = ROW.size
    scale = correlated_standard_error(ROW.std(ddof=1), n, rho)
    dens = stats.t(n - 1, ROW.mean(), scale).pdf
    left = integrate.quad(dens, -np.inf, -r)[0]
    mid = integrate.quad(dens, -r, r, epsabs=1e-13)[0]
    right = integrate.quad(dens, r, np.inf)[0]
    got = bayes_correlated_t_test(ROW, rho, r)
    assert got.left == pytest.approx(left, abs=1e-6)
    assert got.rope == pytest.approx(mid, abs=1e-6)
    assert got.right == pytest.approx(right, abs=1e-6)


def test_single_row_guards():
    with pytest.raises(DegenerateInputError):
        correlated_t_test(np.full(10, 0.02), 0.1)
    with pytest.raises(InputError):
        correlated_t_test([0.1], 0.1)
    with pytest.raises(DomainError):
        correlated_t_test(ROW, 1.0)
    with pytest.raises(DomainError):
        bayes_correlated_t_test(ROW, 0.1, 0.0)


@pytest.mark.parametrize("x", [
    np.array([0.5, -0.2, 0.3, 0.1, 0.7, -0.4, 0.9]),
    np.array([1.0, 1.0, -1.0, 2.0, 2.0, 3.0, -3.0, 0.0, 4.0]),  # ties and a zero
    np.array([0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0, 1.1, 1.2]),
])
def test_exact_signed_rank_matches_enumeration(x):
    res = signed_rank_test(x)
    assert res.method == "exact"
    assert res.p_value == pytest.approx(enumerate_signed_rank_p(x), abs=1e-12)
    assert res.n_used == np.count_nonzero(x)


def test_exact_matches_scipy_without_ties(rng):
    x = rng.normal(0.3, 1, 10)
    assert signed_rank_test(x).p_value == pytest.approx(stats.wilcoxon(x, method="exact").pvalue, abs=1e-12)


def test_normal_approximation_matches_scipy(rng):
    x = np.round(rng.normal(0.2, 1, 40), 1)
    res = signed_rank_test(x)
    assert res.method == "normal"
    ref = stats.wilcoxon(x, zero_method="wilcox", correction=True, method="approx")
    assert res.p_value == pytest.approx(ref.pvalue, rel=1e-9)


def test_signed_rank_degenerate():
    with pytest.raises(DegenerateInputError):
        signed_rank_test(np.zeros(5))


def test_test_result_validates_p():
    with pytest.raises(ValueError):
        TestResult("x", 0.0, None, 1.5)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(-5, 5).filter(bool), min_size=1, max_size=10))
def test_signed_rank_sign_flip_symmetry(values):
    x = np.array(values, float)
    a = signed_rank_test(x)
    b = signed_rank_test(-x)
    assert a.p_value == pytest.approx(b.p_value, abs=1e-12)
    assert 0.0 <= a.p_value <= 1.0


@settings(max_examples=40, deadline=None)
@given(st.floats(-0.05, 0.05), st.floats(0.0, 0.5), st.floats(0.001, 0.05))
def test_rope_probabilities_sum_to_one(shift, rho, r):
    p = bayes_correlated_t_test(ROW + shift, rho, r)
    assert sum(p) == pytest.approx(1.0, abs=1e-12)
    assert min(p) >= 0


@settings(max_examples=40, deadline=None)
@given(st.lists(st.floats(-1, 1, allow_nan=False).filter(lambda v: abs(v) > 1e-6), min_size=1, max_size=15, unique=True))
def test_rank_sum_equals_pairwise_form(values):
    # T+ counts the pairs i <= j whose average is positive, for distinct magnitudes
    x = np.array(values)
    if np.unique(np.abs(x)).size != x.size:
        return
    walsh = sum((x[i] + x[j]) > 0 for i in range(x.size) for j in range(i, x.size))
    assert signed_rank_test(x).statistic == walsh

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from sklearn.datasets import make_friedman1, make_friedman2, make_friedman3

from hiercompare.exceptions import DomainError, InputError
from hiercompare.synth import (
    DeltaPopulation,
    Dataset,
    FriedmanSetting,
    equicorrelated_cv,
    feasible_interval,
    friedman_generate,
    friedman_grid,
    friedman_response,
    kfold_indices,
    nb_pair_cv,
    nb_sample,
    sample_deltas,
)
from hiercompare.synth.naive_bayes import _fold_accuracy


def reference_fold_accuracy(c, x, fold_id, k):
    """Loop version of the smoothed naive-Bayes fold accuracy."""
    acc = []
    for j in range(k):
        tr, te = fold_id != j, fold_id == j
        ct, xt = c[tr], x[tr]
        n_c = np.array([(ct == 0).sum(), (ct == 1).sum()])
        maj = int(n_c[1] > n_c[0])
        pred = {}
        for v in (0, 1):
            if (n_c == 0).any():
                pred[v] = maj
                continue
            s = [(n_c[cl] + 1) / (ct.size + 2) * (((ct == cl) & (xt == v)).sum() + 1) / (n_c[cl] + 2)
                 for cl in (0, 1)]
            pred[v] = 1 if s[1] > s[0] else 0 if s[1] < s[0] else maj
        acc.append(np.mean([pred[v] == cl for v, cl in zip(x[te], c[te])]))
    return np.array(acc)


def test_fold_accuracy_matches_loop(rng):
    for n in (20, 57, 200):
        c, f, g = nb_sample(0.02, n, rng)
        fold_id = rng.integers(0, 10, n)
        fold_id[:10] = np.arange(10)
        for x in (f, g):
            np.testing.assert_allclose(_fold_accuracy(c, x, fold_id, 10), reference_fold_accuracy(c, x, fold_id, 10))


def test_fold_accuracy_single_class_training(rng):
    c = np.array([0] * 10 + [1] * 2, dtype=np.int8)
    x = rng.integers(0, 2, 12).astype(np.int8)
    fold_id = np.array([0] * 10 + [1] * 2)
    np.testing.assert_allclose(_fold_accuracy(c, x, fold_id, 2), reference_fold_accuracy(c, x, fold_id, 2))


def test_nb_pair_cv_mean_tracks_delta(rng):
    for delta in (-0.05, 0.0, 0.05):
        means = [nb_pair_cv(delta, 400, 10, 10, rng).mean() for _ in range(60)]
        assert np.mean(means) == pytest.approx(delta, abs=0.006)


def test_nb_pair_cv_shape_and_range(rng):
    x = nb_pair_cv(0.01, 100, 3, 5, rng)
    assert x.shape == (15,)
    assert np.all(np.abs(x) <= 1)
    with pytest.raises(DomainError):
        nb_pair_cv(0.2, 100, rng=rng)
    with pytest.raises(DomainError):
        nb_pair_cv(0.0, 10, k=10, rng=rng)


def test_feasible_interval():
    assert feasible_interval() == pytest.approx((-0.4, 0.1))


def test_populations(rng):
    lo, hi = feasible_interval()
    d = sample_deltas(DeltaPopulation.cauchy(0.0, 0.05, (lo, hi)), 5000, rng)
    assert d.min() > lo and d.max() < hi
    b = sample_deltas(DeltaPopulation.bimodal(0.005, 0.02, 0.001, 0.5), 4000, rng)
    assert np.mean(b < 0.0125) == pytest.approx(0.5, abs=0.03)
    e = DeltaPopulation.explicit([0.1, 0.2, 0.3])
    np.testing.assert_array_equal(sample_deltas(e, 2, rng), [0.1, 0.2])
    with pytest.raises(InputError):
        sample_deltas(e, 4, rng)
    with pytest.raises(DomainError):
        DeltaPopulation.cauchy(0.0, 0.0)
    with pytest.raises(DomainError):
        sample_deltas(e, 0, rng)


def test_cauchy_null_rope_mass(rng):
    d = sample_deltas(DeltaPopulation.cauchy(0.0, 0.01 / 3, feasible_interval()), 100_000, rng)
    assert np.mean(np.abs(d) < 0.01) == pytest.approx(2 / np.pi * np.arctan(3), abs=0.02)


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 200), st.integers(1, 20))
def test_kfold_partitions(n, k):
    k = min(k, n)
    folds = kfold_indices(n, k, np.random.default_rng(n))
    allidx = np.concatenate(folds)
    assert sorted(allidx) == list(range(n))
    sizes = [f.size for f in folds]
    assert max(sizes) - min(sizes) <= 1
    assert sizes == sorted(sizes, reverse=True)


def test_friedman_responses_match_sklearn():
    X, y = make_friedman1(50, n_features=10, noise=0.0, random_state=0)
    np.testing.assert_allclose(friedman_response("F1", X), y)
    X, y = make_friedman2(50, noise=0.0, random_state=0)
    np.testing.assert_allclose(friedman_response("F2", X), y)
    X, y = make_friedman3(50, noise=0.0, random_state=0)
    np.testing.assert_allclose(friedman_response("F3", X), y)


def test_friedman_grid_and_generation(rng):
    grid = friedman_grid()
    assert len(grid) == 54
    assert len({s.label for s in grid}) == 54
    s = FriedmanSetting("F2", 200, 125.0, 20)
    data = friedman_generate(s, rng)
    assert data.X.shape == (200, 24)
    assert 0.35 < data.y.mean() < 0.65
    with pytest.raises(DomainError):
        FriedmanSetting("F4", 10, 1.0)


def test_dataset_validation():
    with pytest.raises(InputError):
        Dataset(np.zeros((3, 2)), np.array([0, 1, 2]))
    with pytest.raises(InputError):
        Dataset(np.full((2, 2), np.nan), np.array([0, 1]))


def test_equicorrelated_cv_moments(rng):
    x = equicorrelated_cv(np.zeros(4000), 0.05, 0.2, 6, rng)
    c = np.corrcoef(x.T)
    off = c[~np.eye(6, dtype=bool)]
    assert off.mean() == pytest.approx(0.2, abs=0.02)
    assert x.std() == pytest.approx(0.05, rel=0.03)

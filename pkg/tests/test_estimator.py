import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from hiercompare import HierarchicalComparison
from hiercompare.exceptions import InputError
from hiercompare.synth import equicorrelated_cv

FAST = dict(chains=2, warmup=400, draws=400, n_samples=800)


@pytest.fixture(scope="module")
def diffs():
    rng = np.random.default_rng(7)
    return equicorrelated_cv(rng.normal(0.03, 0.01, 12), 0.03, 0.1, 100, rng)


def test_params_round_trip():
    est = HierarchicalComparison(rope=0.02, nu_prior="gamma", random_state=3)
    assert clone(est).get_params() == est.get_params()
    assert est.get_params()["rope"] == 0.02


def test_fit_predict(diffs):
    est = HierarchicalComparison(random_state=1, **FAST).fit(diffs)
    p = est.predict_proba()
    assert p.shape == (3,)
    assert p.sum() == pytest.approx(1.0, abs=1e-12)
    assert est.predict() == "right"
    assert est.rho_ == pytest.approx(0.1)
    assert est.shrinkage_.mean.shape == (12,)
    assert est.shrinkage_.map.converged


def test_fit_is_reproducible(diffs):
    a = HierarchicalComparison(random_state=4, **FAST).fit(diffs)
    b = HierarchicalComparison(random_state=4, **FAST).fit(diffs)
    assert np.array_equal(a.draws_.samples, b.draws_.samples)
    assert a.rope_report_ == b.rope_report_


def test_gamma_prior_pins_alpha_beta(diffs):
    est = HierarchicalComparison(nu_prior="gamma", **FAST).fit(diffs)
    assert np.all(est.draws_.column("alpha") == 2.0)
    assert np.all(est.draws_.column("beta") == 0.1)


def test_input_validation(diffs):
    with pytest.raises(NotFittedError):
        HierarchicalComparison().predict()
    with pytest.raises(ValueError):
        HierarchicalComparison(**FAST).fit(diffs[:1])
    with pytest.raises(InputError):
        HierarchicalComparison(folds=7, **FAST).fit(diffs)
    with pytest.raises(ValueError):
        HierarchicalComparison(nu_prior="flat", **FAST).fit(diffs)
    with pytest.raises(ValueError):
        HierarchicalComparison(**FAST).fit(np.where(diffs > 0.05, np.nan, diffs))

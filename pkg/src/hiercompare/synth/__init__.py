"""Synthetic data: difference populations, generators, classifiers, paired CV."""
from .classifiers import GiniTree, LinearDiscriminant
from .crossval import Dataset, cross_validate_pair, kfold_indices
from .friedman import (
    FriedmanSetting,
    friedman_generate,
    friedman_grid,
    friedman_response,
    friedman_threshold,
    with_threshold,
)
from .naive_bayes import THETA_F, feasible_interval, nb_pair_cv, nb_sample
from .populations import DeltaPopulation, sample_deltas
from .truth import equicorrelated_cv, true_delta

__all__ = [
    "DeltaPopulation", "sample_deltas", "nb_pair_cv", "nb_sample", "feasible_interval", "THETA_F",
    "FriedmanSetting", "friedman_grid", "friedman_generate", "friedman_response",
    "friedman_threshold", "with_threshold", "LinearDiscriminant", "GiniTree",
    "Dataset", "kfold_indices", "cross_validate_pair", "true_delta", "equicorrelated_cv",
]

"""Bayesian hierarchical comparison of two classifiers over many data sets."""
from .baselines import TestResult, bayes_correlated_t_test, correlated_t_test, signed_rank_test
from .estimator import HierarchicalComparison
from .exceptions import (
    DegenerateInputError,
    DomainError,
    InputError,
    ParseError,
    SetupError,
    UndefinedOddsError,
)
from .inference import (
    RopeReport,
    map_fixed_point,
    mse_closed_forms,
    next_delta_simplex,
    posterior_odds,
    shrinkage_estimates,
)
from .io import parse_results, parse_score_pair, write_results
from .kde import kde_export, kde_grid, nrd0_bandwidth
from .model import CrossValMatrix, HierConfig, log_lik_equicorr, log_posterior, sufficient_stats
from .sampler import ChainConfig, PosteriorDraws, ess, r_hat, run_chains

__version__ = "0.1.0"

__all__ = [
    "ChainConfig", "CrossValMatrix", "DegenerateInputError", "DomainError",
    "HierConfig", "HierarchicalComparison", "InputError", "ParseError",
    "PosteriorDraws", "RopeReport", "SetupError", "TestResult", "UndefinedOddsError",
    "bayes_correlated_t_test", "correlated_t_test", "ess", "kde_export", "kde_grid",
    "log_lik_equicorr", "log_posterior", "map_fixed_point", "mse_closed_forms",
    "next_delta_simplex", "nrd0_bandwidth", "parse_results", "parse_score_pair",
    "posterior_odds", "r_hat", "run_chains", "shrinkage_estimates", "signed_rank_test",
    "sufficient_stats", "write_results",
]

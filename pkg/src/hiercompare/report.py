"""Assemble JSON-ready reports from fitted comparisons."""
from __future__ import annotations

import numpy as np

from .baselines import correlated_t_test, signed_rank_test
from .exceptions import DegenerateInputError
from .io import SCHEMA_VERSION


def _summary(x):
    return {"mean": float(np.mean(x)), "sd": float(np.std(x)),
            "q025": float(np.quantile(x, 0.025)), "q975": float(np.quantile(x, 0.975))}


def baseline_results(cv, rho: float) -> dict:
    means = cv.diffs.mean(axis=1)
    try:
        signed = signed_rank_test(means).to_dict()
    except DegenerateInputError as exc:
        signed = {"error": str(exc)}
    per_row = []
    for name, row in zip(cv.names, cv.diffs):
        try:
            res = correlated_t_test(row, rho)
            per_row.append({"dataset": name, "statistic": res.statistic, "dof": res.dof, "p_value": res.p_value})
        except DegenerateInputError as exc:
            per_row.append({"dataset": name, "error": str(exc)})
    return {"signed_rank": signed, "correlated_t": per_row}


def compare_report(est) -> dict:
    """Report for a fitted :class:`~hiercompare.estimator.HierarchicalComparison`."""
    cv, cfg, draws = est.cv_, est.config_, est.draws_
    names = list(draws.names)
    hyper = {k: _summary(draws.column(k)) for k in ("delta0", "sigma0", "nu", "alpha", "beta")}
    return {
        "schema_version": SCHEMA_VERSION,
        "command": "compare",
        "seed": cfg.seed,
        "config": {
            "rope": cfg.rope, "rho": est.rho_, "runs": cv.runs, "folds": cv.folds,
            "alpha": cfg.decision_alpha, "n_samples": cfg.n_samples, "chains": cfg.chains,
            "warmup": cfg.warmup, "draws": cfg.draws, "target_accept": cfg.target_accept,
            "sigma_factor": cfg.sigma_factor, "sigma0_factor": cfg.sigma0_factor,
            "nu_prior": "hierarchical" if cfg.fixed_gamma is None else "gamma",
            "delta0_bounds": list(cfg.delta0_bounds), "alpha_bounds": list(cfg.alpha_bounds),
            "beta_bounds": list(cfg.beta_bounds),
        },
        "data": {
            "q": cv.q, "n": cv.n, "names": list(cv.names),
            "mean": est.stats_.mean.tolist(), "sd": est.stats_.sd.tolist(),
        },
        "rope": est.rope_report_.to_dict(),
        "shrinkage": est.shrinkage_.to_dict(),
        "posterior": hyper,
        "baselines": baseline_results(cv, est.rho_),
        "diagnostics": {
            "converged": draws.converged,
            "max_rhat": float(np.max(draws.rhat)),
            "min_ess": float(np.min(draws.ess)),
            "rhat": dict(zip(names, draws.rhat.tolist())),
            "ess": dict(zip(names, draws.ess.tolist())),
            "acceptance": dict(zip(names, draws.acceptance.tolist())),
            "move_acceptance": {"shift": float(draws.move_acceptance[0]), "scale": float(draws.move_acceptance[1])},
        },
    }

"""Command-line interface: ``hiercompare {compare,ttest,simulate,kde}``.

Exit codes: 0 success, 2 usage or input error, 3 degenerate input,
4 non-convergence under ``--strict-convergence``.
"""
from __future__ import annotations

import argparse
import logging
import sys
import time
from pathlib import Path

import numpy as np

from .baselines import bayes_correlated_t_test, correlated_standard_error, correlated_t_test
from .estimator import HierarchicalComparison
from .exceptions import DegenerateInputError, InputError, SetupError
from .inference import predictive_deltas
from .io import SCHEMA_VERSION, dumps_report, parse_results, parse_score_pair
from .kde import kde_export
from .simulate import SCENARIOS, SimulationOptions, run_scenario, write_rows

EXIT_USAGE = 2
EXIT_DEGENERATE = 3
EXIT_NOT_CONVERGED = 4


class UsageError(Exception):
    pass


def _add_layout(p):
    p.add_argument("--runs", type=int, help="cross-validation runs m (default: from file or n / folds)")
    p.add_argument("--folds", type=int, help="folds per run k (default: from file or 10)")
    p.add_argument("--rho", type=float, help="fold correlation (default 1/folds)")
    p.add_argument("--rope", type=float, default=0.01, help="rope radius r (default 0.01)")


def _add_fit(p):
    p.add_argument("--chains", type=int, default=4)
    p.add_argument("--warmup", type=int, default=2000)
    p.add_argument("--draws", type=int, default=1000, help="retained draws per chain")
    p.add_argument("--ns", type=int, default=4000, help="posterior draws used for the rope counts")
    p.add_argument("--alpha", type=float, default=0.05)
    p.add_argument("--nu-prior", choices=("hierarchical", "gamma"), default="hierarchical")
    p.add_argument("--sigma-factor", type=float, default=1000.0)
    p.add_argument("--sigma0-factor", type=float, default=1000.0)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hiercompare", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compare", help="hierarchical comparison on several data sets")
    p.add_argument("results", nargs="?", help="CSV of fold differences")
    p.add_argument("--scores", nargs=2, metavar=("A", "B"),
                   help="two CSVs of per-classifier fold accuracies; differences are A - B")
    _add_layout(p)
    _add_fit(p)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--strict-convergence", action="store_true", help="exit 4 if any R-hat exceeds 1.1")
    p.add_argument("--density-out", help="write a KDE of the posterior predictive difference to this CSV")
    p.add_argument("--timing", action="store_true", help="add runtime_seconds to the report")

    p = sub.add_parser("ttest", help="correlated t-tests on a single data set")
    p.add_argument("results", help="CSV of fold differences")
    p.add_argument("--dataset", help="row to test (required when the file has several rows)")
    _add_layout(p)

    p = sub.add_parser("simulate", help="run a simulation scenario")
    p.add_argument("--scenario", required=True, help=", ".join(SCENARIOS))
    p.add_argument("--replicates", type=int, default=50)
    p.add_argument("--q", type=int, nargs="+", default=[10], help="numbers of data sets")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--instances", type=int,
                   help="instances per naive-Bayes data set (default 400 for mse-bimodal, else 1000)")
    p.add_argument("--delta0", type=float, help="Cauchy location for equivalent/different scenarios")
    p.add_argument("--signed-rank-only", action="store_true", help="skip the hierarchical fits")
    p.add_argument("--truth-reps", type=int, default=0,
                   help="friedman: Monte-Carlo replicates for each setting's true difference")
    p.add_argument("--out-dir", help="write summary.json and per-replicate CSV here")
    p.add_argument("--rope", type=float, default=0.01)
    p.add_argument("--runs", type=int, default=10)
    p.add_argument("--folds", type=int, default=10)
    _add_fit(p)

    p = sub.add_parser("kde", help="Gaussian kernel density of a column of samples")
    p.add_argument("samples", help="CSV or text file with one number per line (header optional)")
    p.add_argument("--out", required=True, help="output CSV of x,density")
    p.add_argument("--bandwidth", type=float)
    p.add_argument("--points", type=int, default=512)
    return parser


def _load(args):
    if args.scores and args.results:
        raise UsageError("give either a results file or --scores A B, not both")
    if args.scores:
        return parse_score_pair(args.scores[0], args.scores[1], args.runs, args.folds)
    if not args.results:
        raise UsageError("a results file (or --scores A B) is required")
    return parse_results(args.results, args.runs, args.folds)


def _fit_kwargs(args) -> dict:
    return dict(chains=args.chains, warmup=args.warmup, draws=args.draws, n_samples=args.ns,
                alpha=args.alpha, nu_prior=args.nu_prior, sigma_factor=args.sigma_factor,
                sigma0_factor=args.sigma0_factor)


def cmd_compare(args):
    """Return ``(report, exit_code)``."""
    from .report import compare_report

    start = time.perf_counter()
    cv = _load(args)
    if cv.q < 2:
        raise UsageError("compare needs at least two data sets; use `hiercompare ttest` for one")
    est = HierarchicalComparison(rope=args.rope, rho=args.rho, folds=cv.folds,
                                 random_state=args.seed, **_fit_kwargs(args)).fit(cv)
    report = compare_report(est)
    if args.density_out:
        rng = np.random.default_rng([args.seed, 2])
        deltas = predictive_deltas(est.draws_, args.ns, rng)
        lo, hi = np.quantile(deltas, [0.005, 0.995])
        grid = np.linspace(min(lo, cv.diffs.mean(axis=1).min()), max(hi, cv.diffs.mean(axis=1).max()), 512)
        kde_export(deltas, args.density_out, grid=grid)
    if args.timing:
        report["runtime_seconds"] = time.perf_counter() - start
    code = 0
    if args.strict_convergence and not est.converged_:
        code = EXIT_NOT_CONVERGED
    return report, code


def cmd_ttest(args):
    cv = parse_results(args.results, args.runs, args.folds)
    if args.dataset is not None:
        if args.dataset not in cv.names:
            raise InputError(f"no data set named {args.dataset!r}")
        i = cv.names.index(args.dataset)
    elif cv.q == 1:
        i = 0
    else:
        raise UsageError(f"file has {cv.q} data sets; choose one with --dataset or use `compare`")
    x = cv.diffs[i]
    rho = 1.0 / cv.folds if args.rho is None else args.rho
    freq = correlated_t_test(x, rho)
    probs = bayes_correlated_t_test(x, rho, args.rope)
    return {
        "schema_version": SCHEMA_VERSION,
        "command": "ttest",
        "config": {"rope": args.rope, "rho": rho, "runs": cv.runs, "folds": cv.folds},
        "dataset": cv.names[i],
        "mean": float(x.mean()),
        "sd": float(x.std(ddof=1)),
        "standard_error": correlated_standard_error(float(x.std(ddof=1)), x.size, rho),
        "correlated_t": freq.to_dict(),
        "bayes_correlated_t": probs._asdict(),
    }, 0


def cmd_simulate(args):
    if args.scenario not in SCENARIOS:
        raise UsageError(f"unknown scenario {args.scenario!r}; choose from {', '.join(SCENARIOS)}")
    opts = SimulationOptions(
        replicates=args.replicates, q=tuple(args.q), seed=args.seed, instances=args.instances,
        runs=args.runs, folds=args.folds, rope=args.rope, delta0=args.delta0,
        hierarchical=not args.signed_rank_only, truth_reps=args.truth_reps,
        fit=_fit_kwargs(args),
    )
    summary, rows = run_scenario(args.scenario, opts)
    report = {"schema_version": SCHEMA_VERSION, "command": "simulate", **summary}
    if args.out_dir:
        out = Path(args.out_dir)
        out.mkdir(parents=True, exist_ok=True)
        write_rows(rows, out / f"{args.scenario}_replicates.csv")
        (out / "summary.json").write_text(dumps_report(report))
    return report, 0


def _read_samples(path) -> np.ndarray:
    values = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            cell = line.strip().split(",")[0].strip()
            if not cell or cell.startswith("#"):
                continue
            try:
                values.append(float(cell))
            except ValueError:
                if values or lineno > 1:
                    raise InputError(f"line {lineno}: cannot parse {cell!r} as a number")
    return np.array(values)


def cmd_kde(args):
    x = _read_samples(args.samples)
    kde_export(x, args.out, bandwidth=args.bandwidth, n_points=args.points)
    return {"schema_version": SCHEMA_VERSION, "command": "kde", "n": int(x.size), "out": args.out}, 0


_COMMANDS = {"compare": cmd_compare, "ttest": cmd_ttest, "simulate": cmd_simulate, "kde": cmd_kde}


def _error(kind: str, message: str) -> dict:
    return {"schema_version": SCHEMA_VERSION, "error": {"type": kind, "message": message}}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        report, code = _COMMANDS[args.command](args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"hiercompare {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DegenerateInputError as exc:
        sys.stdout.write(dumps_report(_error("degenerate_input", str(exc))))
        return EXIT_DEGENERATE
    except (InputError, SetupError, OSError) as exc:
        print(f"hiercompare {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    sys.stdout.write(dumps_report(report))
    return code


if __name__ == "__main__":
    sys.exit(main())

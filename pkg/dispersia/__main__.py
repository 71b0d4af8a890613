"""
Main entry point of Dispersia, providing :func:`main` and :func:`cli_main`.
Run ``python -m dispersia --help`` or ``./vrt.py --help``.

Exit codes: 0 success, 2 fit failure, 64 usage error, 65 data error, 66 config error.
"""

from __future__ import annotations

import argparse
import dataclasses
import os
import sys
import time
import typing
from typing import List, Optional, Sequence

from dispersia.config import Config, load_config, parse_config
from dispersia.datasets import load_csv_series
from dispersia.distributions import get_distribution_class
from dispersia.errors import (
    BinningError,
    ConfigError,
    ConvergenceError,
    DataError,
    DegenerateDataError,
    DomainError,
    ParameterDomainError,
)
from dispersia.fitting import FitResult, fit_mle
from dispersia.gof import DefaultMinExpected, GofResult, ks_test, pearson_chi2
from dispersia.log import log
from dispersia.report import ReportTable, emit_report, key_value_table
from dispersia.simulation import (
    ExperimentSummary,
    histogram_table,
    rejection_preset,
    rejection_table,
    run_rejection_experiment,
    run_table1,
    run_table1_rows,
    table1_configs,
    table1_table,
)
from dispersia.util import debug as debug_util
from dispersia.util.basic import describe_dispersia_version, format_params, get_number_available_cpus, hms_fraction
from dispersia.vartest import (
    DefaultTolerance,
    alpha_condition,
    validity_verdict,
    variance_function,
    vartest,
)

ExitOk = 0
ExitFitFailure = 2
ExitUsage = 64
ExitDataError = 65
ExitConfigError = 66

SeedEnvVar = "DISPERSIA_SEED"
DefaultSeed = 42
FitFamilies = ("exponential", "gamma", "weibull", "lognormal", "poisson", "binomial")
ValidityFamilies = ("poisson", "binomial", "exponential", "gamma-known-shape")

config = None  # type: typing.Optional[Config]


class _ArgumentParser(argparse.ArgumentParser):
    """
    Exits with :data:`ExitUsage` on invalid arguments.
    """

    def error(self, message):
        """
        :param str message:
        """
        self.print_usage(sys.stderr)
        self.exit(ExitUsage, "%s: error: %s\n" % (self.prog, message))


def _common_args() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--verbosity", type=int, choices=range(6), help="log verbosity, default 2")
    common.add_argument("--log", action="append", help="additional log file (can use $date)")
    common.add_argument("--seed", type=int, help="master seed, overrides $%s and the config" % SeedEnvVar)
    common.add_argument("--threads", type=int, default=1, help="worker processes for simulations, 0: all CPUs")
    common.add_argument("--out", help="write the report to this file instead of stdout")
    common.add_argument("--format", choices=("text", "csv"), default="text", help="report format")
    return common


def _data_args(parser: argparse.ArgumentParser, families: Sequence[str] = FitFamilies):
    parser.add_argument("--family", required=True, choices=families)
    parser.add_argument("--input", required=True, help="CSV file with header row")
    parser.add_argument("--column", required=True, help="column name")
    parser.add_argument("--size", type=int, help="number of trials, for binomial")


def make_arg_parser() -> argparse.ArgumentParser:
    """
    :return: parser for all subcommands
    """
    common = _common_args()
    parser = _ArgumentParser(prog="dispersia", description="Variance ratio test and its validity check.")
    sub = parser.add_subparsers(dest="command", metavar="command", parser_class=_ArgumentParser)
    sub.required = True

    p = sub.add_parser("fit", parents=[common], help="MLE fit of a family to a data column")
    _data_args(p)

    p = sub.add_parser("vartest", parents=[common], help="variance ratio test with validity verdict")
    _data_args(p)
    p.add_argument("--df-convention", choices=("n", "n-1"), default="n")
    p.add_argument("--tolerance", type=float, default=DefaultTolerance)

    p = sub.add_parser("validity", parents=[common], help="asymptotic validity condition alpha of a family")
    p.add_argument("--family", required=True, choices=ValidityFamilies)
    p.add_argument("--size", type=int, help="binomial number of trials M")
    p.add_argument("--prob", type=float, default=0.5, help="binomial success probability")
    p.add_argument("--shape", type=float, help="known gamma shape k")
    p.add_argument("--mean", type=float, default=1.0, help="population mean (alpha does not depend on it)")
    p.add_argument("--tolerance", type=float, default=DefaultTolerance)
    p.add_argument("--printed-cross-term", action="store_true", help="mu instead of f(mu) in the cross term")

    p = sub.add_parser("simulate", help="Monte Carlo experiments")
    sim = p.add_subparsers(dest="experiment", metavar="experiment", parser_class=_ArgumentParser)
    sim.required = True
    q = sim.add_parser("table1", parents=[common], help="mean and variance of D, default: all rows")
    q.add_argument("--config", help="JSON experiment config; default is the full table preset")
    q.add_argument("--replicates", type=int)
    q = sim.add_parser("rejection", parents=[common], help="rejection rates of the variance ratio test")
    q.add_argument("--scenario", choices=("mooley-false-reject", "mooley-false-accept", "custom"), required=True)
    q.add_argument("--config", help="JSON experiment config, required for the custom scenario")
    q.add_argument("--replicates", type=int)
    q.add_argument("--hist-out", help="write histogram CSV of D with the chi-square cutoffs")
    q.add_argument("--hist-bins", type=int, default=50)

    p = sub.add_parser("gof", help="chi-square or Kolmogorov-Smirnov goodness of fit")
    gof = p.add_subparsers(dest="test", metavar="test", parser_class=_ArgumentParser)
    gof.required = True
    for name in ("chi2", "ks"):
        q = gof.add_parser(name, parents=[common])
        _data_args(q)
        q.add_argument("--params", help="fully specified params, e.g. shape=2,scale=3; default: MLE fit")
        if name == "chi2":
            q.add_argument("--min-expected", type=float, default=DefaultMinExpected)
    return parser


def init_config(args: argparse.Namespace):
    """
    Initializes the global config, from ``--config`` if given.
    """
    global config
    config = load_config(getattr(args, "config", None))


def init_log(args: argparse.Namespace):
    """
    Initializes the global :class:`Log` via :func:`Log.init_by_config`.
    ``--log`` adds to the config "log" targets, ``--verbosity`` replaces "log_verbosity".
    """
    if args.log:
        config.set("log", config.list("log") + list(args.log))
    if args.verbosity is not None:
        config.set("log_verbosity", [args.verbosity])
    elif not config.has("log_verbosity"):
        config.set("log_verbosity", [2])
    log.init_by_config(config)


def dispersia_greeting(argv: Sequence[str]):
    """
    Prints some greeting to the log.
    """
    print(
        "Dispersia starting up, version %s, date/time %s, pid %i, cwd %s, Python %s"
        % (
            describe_dispersia_version(),
            time.strftime("%Y-%m-%d-%H-%M-%S (UTC%z)"),
            os.getpid(),
            os.getcwd(),
            sys.executable,
        ),
        file=log.v4,
    )
    print("Dispersia command line options: %s" % (list(argv),), file=log.v4)


def resolve_seed(args: argparse.Namespace, config_seed: Optional[int] = None) -> int:
    """
    ``--seed`` over ``$DISPERSIA_SEED`` over the config.
    """
    if args.seed is not None:
        seed = args.seed
    elif os.environ.get(SeedEnvVar):
        try:
            seed = int(os.environ[SeedEnvVar])
        except ValueError:
            raise ConfigError("not an integer: %r" % os.environ[SeedEnvVar], key_path="$" + SeedEnvVar)
    elif config_seed is not None:
        seed = config_seed
    else:
        seed = DefaultSeed
    if not 0 <= seed < 2**64:
        raise ConfigError("must be a 64-bit unsigned int, got %r" % seed, key_path="master_seed")
    print("master seed: %i" % seed, file=log.v2)
    return seed


def _num_workers(args: argparse.Namespace) -> int:
    if args.threads < 0:
        raise DomainError("--threads must be >= 0, got %i" % args.threads)
    if args.threads == 0:
        return get_number_available_cpus() or 1
    return args.threads


def _emit(args: argparse.Namespace, tables: List[ReportTable]):
    if args.out:
        with open(args.out, "w", newline="") as f:
            for table in tables:
                emit_report(table, args.format, f)
    else:
        for table in tables:
            emit_report(table, args.format)


def _load_values(args: argparse.Namespace):
    return load_csv_series(args.input, args.column).values


def fit_table(fit: FitResult) -> ReportTable:
    """
    :return: one row per fit property
    """
    items = [("family", fit.family)]
    items += [(name, value) for name, value in fit.spec.params.items()]
    items += [
        ("log_likelihood", fit.log_likelihood),
        ("plug_in_variance", fit.plug_in_variance),
        ("iterations", fit.iterations),
        ("converged", fit.converged),
        ("gradient_norm", fit.gradient_norm),
    ]
    return key_value_table("MLE fit", items)


def gof_tables(result: GofResult, family: str) -> List[ReportTable]:
    """
    :return: summary table, and for chi-square the bins table
    """
    items = [("test", result.test), ("family", family), ("n", result.n), ("statistic", result.statistic)]
    if result.df is not None:
        items.append(("df", result.df))
    items += [("p_value", result.p_value), ("params_estimated", result.params_estimated)]
    tables = [key_value_table("Goodness of fit", items)]
    if result.bins:
        tables.append(
            ReportTable(
                title="Bins",
                column_names=("lower", "upper", "observed", "expected"),
                rows=[(b.lower, b.upper, b.observed, b.expected) for b in result.bins],
            )
        )
    return tables


def _parse_params(text: str) -> dict:
    params = {}
    for part in text.split(","):
        if "=" not in part:
            raise DomainError("expected name=value, got %r" % part)
        name, value = part.split("=", 1)
        try:
            params[name.strip()] = float(value)
        except ValueError:
            raise DomainError("not a number for %s: %r" % (name.strip(), value))
    return params


def cmd_fit(args: argparse.Namespace) -> int:
    """
    MLE fit of ``--family`` to one CSV column, printed as a key/value table.
    """
    resolve_seed(args)
    fit = fit_mle(args.family, _load_values(args), size=args.size)
    _emit(args, [fit_table(fit)])
    return ExitOk


def cmd_vartest(args: argparse.Namespace) -> int:
    """
    Fits, computes D and both p-values, and prints the alpha validity verdict to the log.
    """
    resolve_seed(args)
    values = _load_values(args)
    fit, outcome, verdict = vartest(
        values, args.family, df_convention=args.df_convention, size=args.size, tolerance=args.tolerance
    )
    items = [("family", fit.family), ("params", format_params(fit.spec.params)), ("n", outcome.n)]
    items += [
        ("plug_in_variance", fit.plug_in_variance),
        ("D", outcome.statistic_d),
        ("df_convention", outcome.df_convention),
        ("p_value", outcome.p_value_mooley),
        ("p_value_df_n", outcome.p_value_n),
        ("p_value_df_n_minus_1", outcome.p_value_n_minus_1),
        ("alpha", verdict.alpha),
        ("tolerance", verdict.tolerance),
        ("verdict", "VALID" if verdict.valid else "INVALID"),
    ]
    _emit(args, [key_value_table("Variance ratio test", items)])
    if verdict.valid:
        print(verdict.describe(fit.family), file=log.v2)
    return ExitOk


def cmd_validity(args: argparse.Namespace) -> int:
    """
    Prints alpha for a family, without any data.
    """
    from dispersia.distributions import Binomial, Exponential, Gamma, Poisson

    resolve_seed(args)
    if args.family == "poisson":
        spec, f = Poisson(mean=args.mean), variance_function("poisson")
    elif args.family == "binomial":
        if args.size is None:
            raise DomainError("--size is required for binomial")
        spec, f = Binomial(size=args.size, prob=args.prob), variance_function("binomial", size=args.size)
    elif args.family == "exponential":
        spec, f = Exponential(mean=args.mean), variance_function("exponential")
    else:
        if args.shape is None:
            raise DomainError("--shape is required for gamma-known-shape")
        spec = Gamma(shape=args.shape, scale=args.mean / args.shape)
        f = variance_function("gamma_known_shape", shape=args.shape)
    alpha = alpha_condition(spec.moments(), f, printed_cross_term=args.printed_cross_term)
    verdict = validity_verdict(alpha, args.tolerance)
    items = [
        ("family", args.family),
        ("variance_function", f.name),
        ("alpha", alpha),
        ("tolerance", verdict.tolerance),
        ("verdict", "VALID" if verdict.valid else "INVALID"),
    ]
    _emit(args, [key_value_table("Validity condition", items)])
    if verdict.valid:
        print(verdict.describe(args.family), file=log.v2)
    else:
        log.print_warning(verdict.describe(args.family))
    return ExitOk


def cmd_simulate_table1(args: argparse.Namespace) -> int:
    """
    Means and variances of D over a grid, from ``--config`` or the full seven-row preset.
    """
    if args.config:
        exp = parse_config(config)
        seed = resolve_seed(args, exp.master_seed)
        updates = {"master_seed": seed}
        if args.replicates is not None:
            updates["replicates"] = args.replicates
        exp = _replace(exp, **updates)
        summary = run_table1(exp, num_workers=_num_workers(args))
    else:
        seed = resolve_seed(args)
        kwargs = {"master_seed": seed}
        if args.replicates is not None:
            kwargs["replicates"] = args.replicates
        summary = run_table1_rows(_table1_presets(**kwargs), num_workers=_num_workers(args))
    _emit(args, [table1_table(summary)])
    return ExitOk


def _replace(exp, **updates):
    try:
        return dataclasses.replace(exp, **updates)
    except ConfigError:
        raise
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc))


def _table1_presets(**kwargs):
    try:
        return table1_configs(**kwargs)
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc))


def cmd_simulate_rejection(args: argparse.Namespace) -> int:
    """
    Rejection rate of the equal-tail test for a preset or custom scenario, with optional histogram.
    """
    if args.scenario == "custom":
        if not args.config:
            raise DomainError("--config is required for the custom scenario")
        exp = parse_config(config)
    else:
        exp = rejection_preset(args.scenario)
    seed = resolve_seed(args, exp.master_seed if args.config else None)
    updates = {"master_seed": seed}
    if args.replicates is not None:
        updates["replicates"] = args.replicates
    exp = _replace(exp, **updates)
    summary = run_rejection_experiment(exp, num_workers=_num_workers(args))
    _emit(args, [rejection_table(summary, exp.level)])
    if args.hist_out:
        _write_histograms(summary, args.hist_out, args.hist_bins, exp.level)
    return ExitOk


def _write_histograms(summary: ExperimentSummary, path: str, bins: int, level: float):
    for i, cell in enumerate(summary.cells):
        filename = path
        if len(summary.cells) > 1:
            stem, ext = os.path.splitext(path)
            filename = "%s.%i%s" % (stem, i, ext)
        emit_report(histogram_table(cell, bins=bins, level=level), "csv", filename)
        print("Wrote histogram to %s." % filename, file=log.v3)


def cmd_gof(args: argparse.Namespace) -> int:
    """
    Pearson chi-square or KS test, against given params or the MLE fit.
    """
    resolve_seed(args)
    values = _load_values(args)
    if args.params:
        params = _parse_params(args.params)
        clazz = get_distribution_class(args.family)
        if args.family == "binomial":
            params["size"] = int(params.get("size", args.size or 0))
        spec = clazz(**params)
        fitted = 0
    else:
        spec = fit_mle(args.family, values, size=args.size).spec
        fitted = len(spec.param_names) - (1 if args.family == "binomial" else 0)
    if args.test == "chi2":
        result = pearson_chi2(values, spec, fitted_param_count=fitted, min_expected=args.min_expected)
    else:
        result = ks_test(values, spec, params_estimated=fitted > 0)
    _emit(args, gof_tables(result, "%s(%s)" % (spec.family, format_params(spec.params))))
    return ExitOk


def _dispatch(args: argparse.Namespace) -> int:
    if args.command == "fit":
        return cmd_fit(args)
    if args.command == "vartest":
        return cmd_vartest(args)
    if args.command == "validity":
        return cmd_validity(args)
    if args.command == "simulate":
        if args.experiment == "table1":
            return cmd_simulate_table1(args)
        return cmd_simulate_rejection(args)
    if args.command == "gof":
        return cmd_gof(args)
    raise DomainError("unknown command %r" % args.command)


def init(args: argparse.Namespace, argv: Sequence[str]):
    """
    :param args: parsed command line
    :param argv: raw command line, for the greeting
    """
    debug_util.init_better_exchook()
    init_config(args)
    init_log(args)
    dispersia_greeting(argv)
    debug_util.init_faulthandler()


def finalize():
    """
    Flushes the log.
    """
    print("Quitting", file=log.v4)
    log.flush()


def cli_main(argv: Sequence[str]) -> int:
    """
    :param argv: command line arguments, without the program name
    :return: exit code
    """
    try:
        args = make_arg_parser().parse_args(list(argv))
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else ExitUsage
    start_time = time.time()
    try:
        init(args, argv)
        code = _dispatch(args)
    except ConfigError as exc:
        print("ERROR: config: %s" % exc, file=log.v0)
        code = ExitConfigError
    except (ConvergenceError, DegenerateDataError) as exc:
        print("ERROR: fit failed: %s" % exc, file=log.v0)
        code = ExitFitFailure
    except (DataError, BinningError, OSError) as exc:
        print("ERROR: data: %s" % exc, file=log.v0)
        code = ExitDataError
    except (DomainError, ParameterDomainError) as exc:
        print("ERROR: %s" % exc, file=log.v0)
        code = ExitUsage
    print("Finished after %s." % hms_fraction(time.time() - start_time), file=log.v4)
    finalize()
    return code


def main(argv: Optional[Sequence[str]] = None):
    """
    Main entry point.
    """
    if argv is None:
        argv = sys.argv[1:]
    sys.exit(cli_main(argv))


if __name__ == "__main__":
    main()

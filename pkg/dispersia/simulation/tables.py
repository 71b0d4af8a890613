"""
Report tables for experiment summaries.
"""

from __future__ import annotations

import math
from typing import Optional, Sequence

import numpy

from dispersia.distributions.special import chi2_quantile
from dispersia.errors import DomainError
from dispersia.report import ReportTable
from dispersia.util.basic import format_params
from .basic import ExperimentCell, ExperimentSummary, mc_standard_errors


def table1_table(summary: ExperimentSummary) -> ReportTable:
    """
    :return: columns family, params, n, mean_D, var_D, n_failed
    """
    table = ReportTable(
        title="Mean and variance of D (master seed %i)" % summary.master_seed,
        column_names=("family", "params", "n", "mean_D", "var_D", "n_failed"),
    )
    for cell in summary.cells:
        table.add_row(
            cell.true_spec.family,
            format_params(cell.params),
            cell.n,
            cell.empirical_mean_d,
            cell.empirical_var_d,
            cell.n_failed,
        )
    return table


def rejection_table(summary: ExperimentSummary, level: float) -> ReportTable:
    """
    :return: rejections per cell, with the rate and its Monte Carlo standard error
    """
    table = ReportTable(
        title="Rejections of the variance ratio test at level %s (master seed %i)" % (level, summary.master_seed),
        column_names=(
            "true_family",
            "true_params",
            "fit_family",
            "n",
            "replicates",
            "n_failed",
            "rejections",
            "rate",
            "rate_se",
        ),
    )
    for cell in summary.cells:
        table.add_row(
            cell.true_spec.family,
            format_params(cell.params),
            cell.family,
            cell.n,
            cell.replicates,
            cell.n_failed,
            cell.rejection_count,
            cell.rejection_rate,
            mc_standard_errors(cell).rejection_rate,
        )
    return table


def histogram_table(
    cell: ExperimentCell, bins: int = 50, level: float = 0.05, cutoffs: Optional[Sequence[float]] = None
) -> ReportTable:
    """
    Plot-ready histogram of the simulated D of a cell.
    Rows of kind "bin" hold (lower, upper, count), rows of kind "cutoff" the chi-square(n-1) cutoffs,
    with lower = upper = cutoff and count 0.

    :param cell:
    :param bins: number of equal-width bins between min and max D
    :param level: for the default equal-tail cutoffs
    :param cutoffs: custom cutoffs
    """
    if bins < 1:
        raise DomainError("bins must be >= 1, got %r" % (bins,))
    ok = cell.d_values[~numpy.isnan(cell.d_values)]
    if cutoffs is None:
        cutoffs = (chi2_quantile(cell.n - 1, level / 2), chi2_quantile(cell.n - 1, 1 - level / 2))
    table = ReportTable(
        title="Histogram of D, %s(%s), n=%i" % (cell.true_spec.family, format_params(cell.params), cell.n),
        column_names=("kind", "lower", "upper", "count"),
    )
    if len(ok):
        counts, edges = numpy.histogram(ok, bins=bins)
        for i in range(bins):
            table.add_row("bin", float(edges[i]), float(edges[i + 1]), int(counts[i]))
    for c in cutoffs:
        if not math.isfinite(c):
            raise DomainError("cutoff must be finite, got %r" % (c,))
        table.add_row("cutoff", float(c), float(c), 0)
    return table

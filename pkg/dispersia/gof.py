"""
Goodness of fit tests which do not depend on the variance function:
Pearson's chi-square on equal-probability bins, and the one-sample Kolmogorov-Smirnov test.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Tuple, Union

import numpy
import scipy.special

from dispersia.distributions import DistributionSpec
from dispersia.distributions.special import reg_gamma_q
from dispersia.errors import BinningError, DataDomainError, DataError, DomainError
from dispersia.log import log

DefaultMinExpected = 5
MinBins = 4
MaxBins = 20


@dataclass(frozen=True)
class Bin:
    """
    Right-closed bin (lower, upper] with observed and expected counts.
    """

    lower: float
    upper: float
    observed: int
    expected: float


@dataclass(frozen=True)
class GofResult:
    """
    Outcome of a goodness of fit test.
    ``df`` and ``bins`` are only set for the chi-square test.
    """

    test: str
    statistic: float
    p_value: float
    n: int
    df: Optional[float] = None
    bins: Tuple[Bin, ...] = field(default_factory=tuple)
    params_estimated: bool = False


def _as_data(data, min_len: int = 1) -> numpy.ndarray:
    data = numpy.asarray(data, dtype=numpy.float64).ravel()
    if len(data) < min_len:
        raise DataError("need at least %i values, got %i" % (min_len, len(data)))
    if numpy.any(numpy.isnan(data)):
        raise DataDomainError("data contains NaN")
    return data


def num_bins(n: int, min_expected: float = DefaultMinExpected) -> int:
    """
    :return: max(4, min(20, floor(n / min_expected)))
    """
    return max(MinBins, min(MaxBins, int(math.floor(n / min_expected))))


def equal_prob_bins(spec: DistributionSpec, n: int, min_expected: float = DefaultMinExpected) -> numpy.ndarray:
    """
    Bin edges with equal model probability per bin, from the quantiles i/k.
    The first and last edge are the support bounds.
    For discrete families, coinciding quantiles are merged, and the lowest edge is moved below the support,
    so that the lowest value falls into the first right-closed bin.

    :param spec: fully specified model
    :param n: sample size, >= 2 min_expected
    :param min_expected:
    :return: strictly increasing edges, k+1 of them
    """
    if not (min_expected > 0):
        raise BinningError("min_expected must be > 0, got %r" % (min_expected,))
    if n < 2 * min_expected:
        raise BinningError("n = %i too small for min expected count %r" % (n, min_expected))
    k = num_bins(n, min_expected)
    lower, upper = spec.support()
    if spec.is_discrete:
        lower -= 1.0
    interior = numpy.atleast_1d(spec.quantile(numpy.arange(1, k) / k))
    edges = numpy.concatenate([[lower], interior, [upper]])
    if spec.is_discrete:
        edges = numpy.unique(edges)
    if len(edges) < 3 or numpy.any(numpy.diff(edges) <= 0):
        raise BinningError("degenerate bins for %r: %r" % (spec, edges))
    return edges


def pearson_chi2(
    data,
    spec: DistributionSpec,
    fitted_param_count: int = 0,
    min_expected: float = DefaultMinExpected,
    edges: Optional[numpy.ndarray] = None,
) -> GofResult:
    """
    Pearson's chi-square statistic sum (O - E)^2 / E, df = bins - 1 - fitted_param_count.

    :param data:
    :param spec: model, possibly with fitted parameters
    :param fitted_param_count: number of parameters estimated from the data
    :param min_expected: for :func:`equal_prob_bins`
    :param edges: custom bin edges, strictly increasing, covering the data
    """
    data = _as_data(data)
    n = len(data)
    if edges is None:
        edges = equal_prob_bins(spec, n, min_expected)
    edges = numpy.asarray(edges, dtype=float)
    if edges.ndim != 1 or len(edges) < 3 or numpy.any(numpy.diff(edges) <= 0):
        raise BinningError("bin edges must be strictly increasing, at least 2 bins, got %r" % (edges,))
    k = len(edges) - 1
    df = k - 1 - fitted_param_count
    if df < 1:
        raise BinningError("%i bins leave no degrees of freedom for %i fitted params" % (k, fitted_param_count))
    observed = numpy.bincount(numpy.searchsorted(edges[1:-1], data, side="left"), minlength=k)
    expected = n * numpy.diff(numpy.asarray(spec.cdf(edges), dtype=float))
    if numpy.any(expected <= 0):
        raise BinningError("zero expected count in bin %i" % int(numpy.flatnonzero(expected <= 0)[0]))
    statistic = float(numpy.sum((observed - expected) ** 2 / expected))
    bins = tuple(
        Bin(lower=float(edges[i]), upper=float(edges[i + 1]), observed=int(observed[i]), expected=float(expected[i]))
        for i in range(k)
    )
    return GofResult(
        test="chi2",
        statistic=statistic,
        p_value=reg_gamma_q(df / 2.0, statistic / 2.0),
        n=n,
        df=float(df),
        bins=bins,
        params_estimated=fitted_param_count > 0,
    )


def ks_statistic(data, cdf: Union[DistributionSpec, Callable]) -> float:
    """
    D_n = max_i max(i/n - F(x_(i)), F(x_(i)) - (i-1)/n).

    :param data: any order
    :param cdf: model CDF, or a spec
    """
    data = numpy.sort(_as_data(data))
    n = len(data)
    func = cdf.cdf if isinstance(cdf, DistributionSpec) else cdf
    f = numpy.asarray(func(data), dtype=float)
    i = numpy.arange(1, n + 1)
    return float(max(numpy.max(i / n - f), numpy.max(f - (i - 1) / n)))


def ks_pvalue(d_stat: float, n: int) -> float:
    """
    Asymptotic p-value, the Kolmogorov survival function
    2 sum_k (-1)^(k-1) exp(-2 k^2 x^2) at x = sqrt(n) D_n.
    """
    if not (0 <= d_stat <= 1):
        raise DomainError("KS statistic must be in [0, 1], got %r" % (d_stat,))
    if n < 1:
        raise DomainError("n must be >= 1, got %r" % (n,))
    return float(min(1.0, max(0.0, scipy.special.kolmogorov(math.sqrt(n) * d_stat))))


def ks_test(data, spec: DistributionSpec, params_estimated: bool = False) -> GofResult:
    """
    One-sample KS test against a model.
    With estimated parameters the asymptotic p-value does not hold, which we warn about.
    """
    data = _as_data(data)
    statistic = ks_statistic(data, spec)
    if params_estimated:
        log.print_warning(
            "KS p-value assumes fully specified parameters; with parameters estimated from the data it is not valid"
        )
    return GofResult(
        test="ks",
        statistic=statistic,
        p_value=ks_pvalue(statistic, len(data)),
        n=len(data),
        params_estimated=params_estimated,
    )

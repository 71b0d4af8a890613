"""
The variance ratio (index of dispersion) statistic

    D = sum_i (x_i - mean x)^2 / plug-in variance,

its normal-approximation p-value, the exact moments of D under an exponential null with MLE plug-in,
and the asymptotic validity criterion alpha, where D is asymptotically N(n, alpha n).
D is only asymptotically chi-square(n-1) if alpha is close to 2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Tuple

import numpy

from dispersia.distributions import MomentSet
from dispersia.distributions.special import norm_sf
from dispersia.errors import DataError, DomainError, ModelInconsistencyError
from dispersia.fitting import FitResult, fit_mle
from dispersia.log import log

DfConventions = ("n", "n-1")
DefaultTolerance = 0.1
FiniteDifferenceStep = 1e-6


def _check_df_convention(df_convention: str) -> str:
    if df_convention == "nMinus1":
        df_convention = "n-1"
    if df_convention not in DfConventions:
        raise DomainError("df convention must be one of %r, got %r" % (DfConventions, df_convention))
    return df_convention


@dataclass(frozen=True)
class VarTestOutcome:
    """
    Statistic D with its p-values under both degrees of freedom conventions.
    """

    statistic_d: float
    n: int
    df_convention: str
    p_value_n: float
    p_value_n_minus_1: float

    @property
    def p_value_mooley(self) -> float:
        """p-value under the selected convention"""
        return self.p_value_n if self.df_convention == "n" else self.p_value_n_minus_1


@dataclass(frozen=True)
class VarianceFunction:
    """
    Population variance as a function f of the population mean, with its derivative.
    Without an analytic derivative, a central finite difference is used.
    """

    name: str
    evaluate: Callable[[float], float]
    analytic_derivative: Optional[Callable[[float], float]] = None

    def __call__(self, x: float) -> float:
        return self.evaluate(x)

    def derivative(self, x: float) -> float:
        """
        :return: f'(x)
        """
        if self.analytic_derivative is not None:
            return self.analytic_derivative(x)
        return self.finite_difference(x)

    def finite_difference(self, x: float) -> float:
        """
        :return: central difference with relative step
        """
        h = FiniteDifferenceStep * (abs(x) if x != 0 else 1.0)
        return (self.evaluate(x + h) - self.evaluate(x - h)) / (2 * h)

    def without_analytic_derivative(self) -> VarianceFunction:
        """
        :return: same f, derivative by finite differences
        """
        return VarianceFunction(name=self.name, evaluate=self.evaluate)


@dataclass(frozen=True)
class ValidityVerdict:
    """
    Whether the chi-square(n-1) reference for D is asymptotically justified.
    """

    alpha: float
    tolerance: float
    valid: bool

    def describe(self, family: str) -> str:
        """
        :return: human readable one-liner
        """
        if self.valid:
            return "VALID: alpha = %.4f within %s of 2, chi-square(n-1) approximation justified for %s" % (
                self.alpha,
                self.tolerance,
                family,
            )
        return "INVALID: alpha = %.4f, chi-square(n-1) approximation unjustified for %s" % (self.alpha, family)


@dataclass(frozen=True)
class NecessaryConditionCheck:
    """
    Empirical mean and variance of D compared to those of chi-square(n-1).
    """

    mean_ratio: float
    variance_ratio: float
    consistent: bool


def statistic_d(data, variance_estimate: float) -> float:
    """
    :param numpy.ndarray|list[float] data: at least 2 values
    :param variance_estimate: > 0
    :return: sum of squared deviations over variance_estimate
    """
    if not (variance_estimate > 0):
        raise DomainError("variance estimate must be > 0, got %r" % (variance_estimate,))
    data = numpy.asarray(data, dtype=numpy.float64)
    if data.ndim != 1 or len(data) < 2:
        raise DataError("need 1-dim data with at least 2 values, got shape %r" % (data.shape,))
    if numpy.all(data == data[0]):
        return 0.0
    return float(numpy.sum((data - data.mean()) ** 2)) / variance_estimate


def statistic_d_from_fit(data, fit: FitResult) -> float:
    """
    D with the plug-in variance of the fit, evaluated in log space,
    so that it stays finite when the plug-in variance overflows.
    """
    data = numpy.asarray(data, dtype=numpy.float64)
    if numpy.all(data == data[0]):
        return 0.0
    dev = data - data.mean()
    scale = float(numpy.max(numpy.abs(dev)))
    log_ss = 2 * math.log(scale) + math.log(float(numpy.sum((dev / scale) ** 2)))
    return math.exp(log_ss - fit.log_plug_in_variance)


def mooley_pvalue(d: float, n: int, df_convention: str = "n") -> float:
    """
    Two-sided p-value from sqrt(2 D) - sqrt(2 nu - 1) ~ N(0, 1).

    :param d: statistic D >= 0
    :param n: sample size >= 2
    :param df_convention: "n" (nu = n) or "n-1" (nu = n - 1)
    """
    df_convention = _check_df_convention(df_convention)
    if not (d >= 0):
        raise DomainError("D must be >= 0, got %r" % (d,))
    if n < 2:
        raise DomainError("n must be >= 2, got %r" % (n,))
    nu = n if df_convention == "n" else n - 1
    z = abs(math.sqrt(2.0 * d) - math.sqrt(2.0 * nu - 1.0))
    return min(1.0, 2.0 * norm_sf(z))


def var_test_outcome(d: float, n: int, df_convention: str = "n") -> VarTestOutcome:
    """
    :return: outcome with p-values under both conventions
    """
    return VarTestOutcome(
        statistic_d=d,
        n=n,
        df_convention=_check_df_convention(df_convention),
        p_value_n=mooley_pvalue(d, n, "n"),
        p_value_n_minus_1=mooley_pvalue(d, n, "n-1"),
    )


def _check_n(n):
    if n < 2:
        raise DomainError("n must be >= 2, got %r" % (n,))


def theorem1_mean(n: int) -> float:
    """
    Exact E(D) under an exponential null with MLE plug-in: (n-1) n / (n+1).
    """
    _check_n(n)
    return (n - 1) * n / (n + 1)


def theorem1_variance(n: int) -> float:
    """
    Exact Var(D) under an exponential null with MLE plug-in:
    4 (n-1) / ((1+1/n)^2 (1+2/n) (1+3/n)).
    """
    _check_n(n)
    return 4 * (n - 1) / ((1 + 1 / n) ** 2 * (1 + 2 / n) * (1 + 3 / n))


def theorem1_second_moment(n: int) -> float:
    """
    E(D^2) = n^2 (n-1) (n^2+7n-6) / ((n+1)(n+2)(n+3)).
    """
    _check_n(n)
    return n**2 * (n - 1) * (n**2 + 7 * n - 6) / ((n + 1) * (n + 2) * (n + 3))


def exp_conditional_moments(n: int, t: float) -> Tuple[float, float]:
    """
    Exponential sample, S^2 = sum (x_i - mean x)^2, T = sum x_i.

    :return: (E(S^2 | T=t), E(S^4 | T=t))
    """
    _check_n(n)
    if not (t > 0):
        raise DomainError("t must be > 0, got %r" % (t,))
    es2 = (n - 1) * t**2 / (n * (n + 1))
    es4 = (n - 1) * (n**2 + 7 * n - 6) * t**4 / (n * n * (n + 1) * (n + 2) * (n + 3))
    return es2, es4


def exp_unconditional_moments(n: int, mean: float) -> Tuple[float, float]:
    """
    :param n:
    :param mean: exponential mean lambda
    :return: (E S^2, E S^4) = ((n-1) lambda^2, (n-1)(n^2+7n-6) lambda^4 / n)
    """
    _check_n(n)
    if not (mean > 0):
        raise DomainError("mean must be > 0, got %r" % (mean,))
    return (n - 1) * mean**2, (n - 1) * (n**2 + 7 * n - 6) * mean**4 / n


def clt_covariance(m: MomentSet) -> numpy.ndarray:
    """
    Asymptotic covariance of sqrt(n) (mean x - mu, S^2/n - sigma^2).
    """
    return numpy.array([[m.sigma2, m.mu3], [m.mu3, m.mu4 - m.sigma2**2]])


def delta_method_variance(gradient, covariance) -> float:
    """
    :param numpy.ndarray gradient: shape (k,)
    :param numpy.ndarray covariance: shape (k, k)
    :return: g^T Sigma g
    """
    gradient = numpy.asarray(gradient, dtype=float)
    covariance = numpy.asarray(covariance, dtype=float)
    return float(gradient @ covariance @ gradient)


def alpha_condition(
    m: MomentSet, f: VarianceFunction, printed_cross_term: bool = False, consistency_rtol: float = 1e-8
) -> float:
    """
    Asymptotic variance alpha of sqrt(n) (S^2/n / f(mean x) - 1),

        alpha = [sigma^6 f'^2 - 2 f sigma^2 mu3 f' + f^2 (mu4 - sigma^4)] / f^4,

    evaluated at mu.

    :param m: population moments
    :param f: variance function, f(mu) must equal sigma^2
    :param printed_cross_term: use mu instead of f(mu) in the cross term.
      Not scale invariant, only for comparison.
    :param consistency_rtol:
    """
    f_mu = f(m.mu)
    if not (f_mu > 0):
        raise ModelInconsistencyError("%s: f(mu) = %r must be > 0" % (f.name, f_mu))
    if abs(f_mu - m.sigma2) > consistency_rtol * m.sigma2:
        raise ModelInconsistencyError(
            "%s: f(mu) = %r does not match the population variance %r" % (f.name, f_mu, m.sigma2)
        )
    df_mu = f.derivative(m.mu)
    if printed_cross_term:
        s2 = m.sigma2
        return (s2**3 * df_mu**2 - 2 * m.mu * s2 * m.mu3 * df_mu + f_mu**2 * (m.mu4 - s2**2)) / f_mu**4
    # g(a, b) = b / f(a)
    gradient = numpy.array([-m.sigma2 * df_mu / f_mu**2, 1.0 / f_mu])
    return delta_method_variance(gradient, clt_covariance(m))


def validity_verdict(alpha: float, tolerance: float = DefaultTolerance) -> ValidityVerdict:
    """
    :return: valid iff |alpha - 2| <= tolerance
    """
    return ValidityVerdict(alpha=alpha, tolerance=tolerance, valid=bool(abs(alpha - 2.0) <= tolerance))


def asymptotic_law(n: int, alpha: float) -> Tuple[float, float]:
    """
    :return: (mean, variance) of the normal approximation N(n, alpha n) of D
    """
    return float(n), alpha * n


def necessary_condition_check(mean: float, var: float, n: int, rtol: float = DefaultTolerance):
    """
    Compares an empirical mean and variance of D with n-1 and 2(n-1).

    :rtype: NecessaryConditionCheck
    """
    _check_n(n)
    mean_ratio = mean / (n - 1)
    var_ratio = var / (2 * (n - 1))
    return NecessaryConditionCheck(
        mean_ratio=mean_ratio,
        variance_ratio=var_ratio,
        consistent=bool(abs(mean_ratio - 1) <= rtol and abs(var_ratio - 1) <= rtol),
    )


def variance_function(family: str, **params) -> VarianceFunction:
    """
    Known variance functions:

    - "poisson": f(x) = x
    - "binomial" with ``size`` M: f(x) = x (M - x) / M
    - "exponential": f(x) = x^2
    - "gamma_known_shape" with ``shape`` k: f(x) = x^2 / k
    - "scale" with ``coefficient`` c: f(x) = c x^2

    :param family: name as above, "-" may be used instead of "_"
    """
    family = family.replace("-", "_")
    if family == "poisson" and not params:
        return VarianceFunction("poisson", lambda x: x, lambda x: 1.0)
    if family == "binomial" and set(params) == {"size"}:
        size = params["size"]
        if not (isinstance(size, int) and size >= 1):
            raise DomainError("binomial size must be an integer >= 1, got %r" % (size,))
        return VarianceFunction(
            "binomial(size=%i)" % size, lambda x: x * (size - x) / size, lambda x: (size - 2 * x) / size
        )
    if family == "exponential" and not params:
        return VarianceFunction("exponential", lambda x: x * x, lambda x: 2 * x)
    if family == "gamma_known_shape" and set(params) == {"shape"}:
        k = params["shape"]
        if not (k > 0):
            raise DomainError("gamma shape must be > 0, got %r" % (k,))
        return VarianceFunction("gamma(shape=%r)" % k, lambda x: x * x / k, lambda x: 2 * x / k)
    if family == "scale" and set(params) == {"coefficient"}:
        c = params["coefficient"]
        if not (c > 0):
            raise DomainError("scale coefficient must be > 0, got %r" % (c,))
        return VarianceFunction("scale(c=%r)" % c, lambda x: c * x * x, lambda x: 2 * c * x)
    raise DomainError("no variance function for family %r with params %r" % (family, params))


def variance_function_for_fit(fit: FitResult) -> VarianceFunction:
    """
    The variance function implied by a fit, holding the shape of scale families fixed,
    i.e. f(x) = (sigma^2 / mu^2) x^2 there.
    """
    spec = fit.spec
    if spec.family == "poisson":
        return variance_function("poisson")
    if spec.family == "binomial":
        return variance_function("binomial", size=spec.size)
    if spec.family == "exponential":
        return variance_function("exponential")
    if spec.family == "gamma":
        return variance_function("gamma_known_shape", shape=spec.shape)
    mu = fit.mean
    return variance_function("scale", coefficient=math.exp(fit.log_plug_in_variance - 2 * math.log(mu)))


def vartest(
    data,
    family: str,
    df_convention: str = "n",
    size: Optional[int] = None,
    tolerance: float = DefaultTolerance,
) -> Tuple[FitResult, VarTestOutcome, ValidityVerdict]:
    """
    Fit by MLE, compute D with the plug-in variance, the p-values, and the validity verdict of the family.
    """
    fit = fit_mle(family, data, size=size)
    d = statistic_d_from_fit(data, fit)
    outcome = var_test_outcome(d, len(data), df_convention)
    alpha = alpha_condition(fit.spec.moments(), variance_function_for_fit(fit))
    verdict = validity_verdict(alpha, tolerance)
    if not verdict.valid:
        log.print_warning(verdict.describe(fit.family))
    return fit, outcome, verdict

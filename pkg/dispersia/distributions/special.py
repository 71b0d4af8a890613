"""
Special functions which the distribution families, the fitting code and the tests are built upon.

Thin checked wrappers around :mod:`scipy.special`, with explicit domain errors,
plus the chi-square quantile by bracketed root finding.
"""

from __future__ import annotations

import math

import numpy
import scipy.optimize
import scipy.special

from dispersia.errors import DomainError


def _check_positive(name, x):
    if not (x > 0):  # also catches NaN
        raise DomainError("%s must be > 0, got %r" % (name, x))


def log_gamma_fn(x: float) -> float:
    """
    :param x: > 0
    :return: ln Gamma(x)
    """
    _check_positive("x", x)
    return float(scipy.special.gammaln(x))


def digamma_fn(x: float) -> float:
    """
    :param x: > 0
    :return: psi(x), the logarithmic derivative of Gamma
    """
    _check_positive("x", x)
    return float(scipy.special.digamma(x))


def trigamma_fn(x: float) -> float:
    """
    :param x: > 0
    :return: psi'(x)
    """
    _check_positive("x", x)
    return float(scipy.special.polygamma(1, x))


def reg_gamma_p(a: float, x: float) -> float:
    """
    Regularized lower incomplete gamma function.

    :param a: > 0
    :param x: >= 0
    :return: P(a, x) in [0, 1]
    """
    _check_positive("a", a)
    if not (x >= 0):
        raise DomainError("x must be >= 0, got %r" % (x,))
    return float(scipy.special.gammainc(a, x))


def reg_gamma_q(a: float, x: float) -> float:
    """
    Regularized upper incomplete gamma function, 1 - P(a, x), without cancellation in the tail.

    :param a: > 0
    :param x: >= 0
    :return: Q(a, x) in [0, 1]
    """
    _check_positive("a", a)
    if not (x >= 0):
        raise DomainError("x must be >= 0, got %r" % (x,))
    return float(scipy.special.gammaincc(a, x))


def norm_cdf(z: float) -> float:
    """
    :param z:
    :return: Phi(z), standard normal CDF
    """
    return float(scipy.special.ndtr(z))


def norm_sf(z: float) -> float:
    """
    :param z:
    :return: 1 - Phi(z), accurate far in the upper tail
    """
    return float(scipy.special.ndtr(-z))


def chi2_quantile(df: float, p: float) -> float:
    """
    Inverse CDF of the chi-square distribution, x with P(df/2, x/2) = p.

    :param df: degrees of freedom, > 0
    :param p: probability in (0, 1)
    """
    _check_positive("df", df)
    if not (0.0 < p < 1.0):
        raise DomainError("p must be in (0, 1), got %r" % (p,))
    a = df / 2.0

    def func(x):
        return scipy.special.gammainc(a, x / 2.0) - p

    # Bracket: grow upwards from the mean until we pass p.
    lower, upper = 0.0, max(df, 1.0)
    while func(upper) < 0.0:
        lower, upper = upper, upper * 2.0
    if func(lower) >= 0.0:  # only possible for lower == 0
        return 0.0
    x = scipy.optimize.brentq(func, lower, upper, xtol=1e-14, rtol=4 * numpy.finfo(float).eps, maxiter=500)
    return float(x)


def log_expm1(x: float) -> float:
    """
    :param x: > 0
    :return: ln(e^x - 1), finite also when e^x overflows
    """
    _check_positive("x", x)
    if x > 30.0:
        return x + math.log1p(-math.exp(-x))
    return math.log(math.expm1(x))

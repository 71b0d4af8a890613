"""
Maximum likelihood fitting per family, and the plug-in estimate of the population variance
which the variance ratio statistic divides by.

Usage::

    fit = fit_mle("gamma", data)
    print(fit.spec, fit.plug_in_variance)
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Tuple, Type, Union

import numpy
import scipy.special

from dispersia.distributions import (
    Binomial,
    DistributionSpec,
    Exponential,
    Gamma,
    LogNormal,
    Poisson,
    Weibull,
    get_distribution_class,
)
from dispersia.distributions.special import digamma_fn, trigamma_fn
from dispersia.errors import ConvergenceError, DataDomainError, DataError, DegenerateDataError, DomainError
from dispersia.log import log

MaxIterations = 100
StepTolerance = 1e-10
WeibullBracket = (1e-3, 1e3)


@dataclass(frozen=True)
class FitResult:
    """
    Outcome of :func:`fit_mle`.
    """

    spec: DistributionSpec
    log_likelihood: float
    plug_in_variance: float
    iterations: int
    converged: bool
    gradient_norm: float
    log_plug_in_variance: float

    @property
    def family(self) -> str:
        """family tag of the fitted spec"""
        return self.spec.family

    @property
    def mean(self) -> float:
        """population mean of the fitted spec"""
        return self.spec.moments().mu


def _as_data(data) -> numpy.ndarray:
    data = numpy.asarray(data, dtype=numpy.float64)
    if data.ndim != 1:
        raise DataError("expected 1-dim data, got shape %r" % (data.shape,))
    if len(data) < 2:
        raise DataError("need at least 2 values, got %i" % len(data))
    if not numpy.all(numpy.isfinite(data)):
        raise DataDomainError("data contains NaN or infinite values")
    return data


def _check_positive_data(data: numpy.ndarray, family: str):
    bad = numpy.flatnonzero(data <= 0)
    if len(bad):
        raise DataDomainError(
            "%s needs strictly positive data, got %r at index %i" % (family, float(data[bad[0]]), int(bad[0]))
        )


def _check_count_data(data: numpy.ndarray, family: str, upper: Optional[int] = None):
    bad = numpy.flatnonzero((data < 0) | (data != numpy.floor(data)))
    if upper is not None:
        bad = numpy.union1d(bad, numpy.flatnonzero(data > upper))
    if len(bad):
        raise DataDomainError(
            "%s needs integer data in [0, %s], got %r at index %i"
            % (family, upper if upper is not None else "inf", float(data[bad[0]]), int(bad[0]))
        )


def gamma_shape_solve(s: float) -> Tuple[float, int, float]:
    """
    Solves ln(a) - psi(a) = s by Newton on u = ln(a), starting at Thom's approximation.

    :param s: ln(mean x) - mean(ln x), > 0
    :return: (shape, iterations, residual)
    """
    if not (s > 0):
        raise DegenerateDataError("gamma MLE needs ln(mean x) - mean(ln x) > 0, got %r" % (s,))
    shape = (3.0 - s + math.sqrt((s - 3.0) ** 2 + 24.0 * s)) / (12.0 * s)
    u = math.log(shape)
    for i in range(1, MaxIterations + 1):
        g = u - digamma_fn(shape) - s
        dg = 1.0 - shape * trigamma_fn(shape)
        step = g / dg
        u -= step
        shape = math.exp(u)
        if abs(step) < StepTolerance:
            residual = math.log(shape) - digamma_fn(shape) - s
            return shape, i, residual
    raise ConvergenceError("gamma shape Newton did not converge for s=%r" % s, last_iterate=shape, iterations=i)


def gamma_mle_solve(mean_x: float, mean_log_x: float) -> Tuple[float, float]:
    """
    :param mean_x: sample mean
    :param mean_log_x: sample mean of the logs
    :return: (shape, scale)
    """
    shape, _, _ = gamma_shape_solve(math.log(mean_x) - mean_log_x)
    return shape, mean_x / shape


def _weibull_score(k: float, z: numpy.ndarray) -> Tuple[float, float]:
    """
    :param k: shape
    :param z: centered logs, ln x - mean(ln x)
    :return: h(k) = sum(x^k ln x)/sum(x^k) - 1/k - mean(ln x), and dh/dk
    """
    w = numpy.exp(k * (z - z.max()))
    w /= w.sum()
    mean_z = float(numpy.dot(w, z))
    var_z = float(numpy.dot(w, (z - mean_z) ** 2))
    return mean_z - 1.0 / k, var_z + 1.0 / k**2


def weibull_shape_solve(data) -> Tuple[float, int, float]:
    """
    Safeguarded Newton for the Weibull shape, falling back to (geometric) bisection
    whenever a Newton step leaves the current bracket.

    :param numpy.ndarray data: > 0, not all equal
    :return: (shape, iterations, residual)
    """
    log_x = numpy.log(data)
    z = log_x - log_x.mean()
    if numpy.all(z == 0):
        raise DegenerateDataError("Weibull MLE needs data which are not all equal")
    lo, hi = WeibullBracket
    if _weibull_score(lo, z)[0] > 0 or _weibull_score(hi, z)[0] < 0:
        raise ConvergenceError("Weibull shape is outside of the bracket %r" % (WeibullBracket,), iterations=0)
    k = math.pi / (math.sqrt(6.0) * float(z.std()))
    k = min(max(k, lo * 2), hi / 2)
    for i in range(1, MaxIterations + 1):
        h, dh = _weibull_score(k, z)
        if h == 0.0:
            return k, i, h
        if h < 0:
            lo = k
        else:
            hi = k
        k_new = k - h / dh
        if not (lo < k_new < hi):
            k_new = math.sqrt(lo * hi)
        converged = abs(k_new - k) < StepTolerance * k
        k = k_new
        if converged:
            return k, i, _weibull_score(k, z)[0]
    raise ConvergenceError("Weibull shape iteration did not converge", last_iterate=k, iterations=i)


def weibull_mle_solve(data) -> Tuple[float, float]:
    """
    :param numpy.ndarray data: > 0, not all equal
    :return: (shape, scale), scale = mean(x^k)^(1/k)
    """
    data = _as_data(data)
    _check_positive_data(data, "weibull")
    shape, _, _ = weibull_shape_solve(data)
    return shape, _weibull_scale(data, shape)


def _weibull_scale(data: numpy.ndarray, shape: float) -> float:
    log_x = numpy.log(data)
    mean_log = float(log_x.mean())
    z = log_x - mean_log
    return math.exp(mean_log + (float(scipy.special.logsumexp(shape * z)) - math.log(len(data))) / shape)


def _make_result(spec: DistributionSpec, data: numpy.ndarray, iterations: int, gradient_norm: float) -> FitResult:
    log_var = spec.log_variance()
    return FitResult(
        spec=spec,
        log_likelihood=float(numpy.sum(spec.log_pdf(data))),
        plug_in_variance=math.exp(log_var) if log_var < 709.0 else math.inf,
        iterations=iterations,
        converged=True,
        gradient_norm=abs(gradient_norm),
        log_plug_in_variance=log_var,
    )


def fit_mle(family: Union[str, Type[DistributionSpec]], data, size: Optional[int] = None) -> FitResult:
    """
    :param family: "exponential", "gamma", "weibull", "lognormal", "poisson" or "binomial"
    :param numpy.ndarray|list[float] data:
    :param size: number of trials, only for binomial
    :return: the fit. Solver failures raise :class:`ConvergenceError`, they never return silently.
    """
    clazz = get_distribution_class(family)
    if clazz is None:
        raise DomainError("unknown family %r" % (family,))
    data = _as_data(data)
    n = len(data)

    if clazz is Exponential:
        _check_positive_data(data, clazz.family)
        return _make_result(Exponential(mean=float(numpy.mean(data))), data, iterations=0, gradient_norm=0.0)

    if clazz is Gamma:
        _check_positive_data(data, clazz.family)
        mean_x = float(numpy.mean(data))
        s = math.log(mean_x) - float(numpy.mean(numpy.log(data)))
        if numpy.all(data == data[0]) or s <= 0:
            raise DegenerateDataError("gamma MLE on constant data")
        shape, iterations, residual = gamma_shape_solve(s)
        print("gamma MLE: shape %r after %i Newton steps" % (shape, iterations), file=log.v5)
        return _make_result(
            Gamma(shape=shape, scale=mean_x / shape), data, iterations=iterations, gradient_norm=n * residual
        )

    if clazz is Weibull:
        _check_positive_data(data, clazz.family)
        shape, iterations, residual = weibull_shape_solve(data)
        print("Weibull MLE: shape %r after %i iterations" % (shape, iterations), file=log.v5)
        return _make_result(
            Weibull(shape=shape, scale=_weibull_scale(data, shape)),
            data,
            iterations=iterations,
            gradient_norm=n * residual,
        )

    if clazz is LogNormal:
        _check_positive_data(data, clazz.family)
        log_x = numpy.log(data)
        log_mean = float(log_x.mean())
        log_var = float(numpy.mean((log_x - log_mean) ** 2))
        if numpy.all(data == data[0]) or log_var <= 0:
            raise DegenerateDataError("lognormal MLE on constant data")
        return _make_result(
            LogNormal(log_mean=log_mean, log_sd=math.sqrt(log_var)), data, iterations=0, gradient_norm=0.0
        )

    if clazz is Poisson:
        _check_count_data(data, clazz.family)
        mean = float(numpy.mean(data))
        if mean <= 0:
            raise DegenerateDataError("Poisson MLE on all-zero data")
        return _make_result(Poisson(mean=mean), data, iterations=0, gradient_norm=0.0)

    if clazz is Binomial:
        if size is None:
            raise DomainError("binomial fit needs the number of trials (size)")
        _check_count_data(data, clazz.family, upper=size)
        prob = float(numpy.mean(data)) / size
        if not 0.0 < prob < 1.0:
            raise DegenerateDataError("binomial MLE prob=%r on the boundary" % prob)
        return _make_result(Binomial(size=size, prob=prob), data, iterations=0, gradient_norm=0.0)

    raise DomainError("no MLE implemented for family %r" % clazz.family)


def plug_in_variance(fit: FitResult) -> float:
    """
    :return: population variance of the fitted spec, i.e. moments(fit.spec).sigma2
    """
    if not fit.converged:
        raise ConvergenceError("fit did not converge", last_iterate=fit.spec, iterations=fit.iterations)
    return fit.plug_in_variance

"""
Continuous families: :class:`Exponential`, :class:`Gamma`, :class:`Weibull`, :class:`LogNormal`,
:class:`Uniform` and the finite :class:`GammaMixture`.

Densities, CDFs and quantiles come from :mod:`scipy.stats`,
sampling from :class:`numpy.random.Generator`.
"""

from __future__ import annotations

import math
from typing import Tuple

import numpy
import scipy.optimize
import scipy.special
import scipy.stats

from dispersia.errors import ParameterDomainError
from .basic import DistributionSpec, MomentSet, _check_probability, _maybe_scalar
from .special import log_expm1


def _exp_or_inf(x: float) -> float:
    if x > 709.0:
        return math.inf
    return math.exp(x)


class Exponential(DistributionSpec):
    """
    Exponential with density (1/mean) exp(-x/mean).
    """

    family = "exponential"
    param_names = ("mean",)

    def _validate(self):
        self._check_positive("mean")

    def support(self):
        return 0.0, math.inf

    def _scipy_dist(self):
        return scipy.stats.expon(scale=self.mean)

    def moments(self):
        lam = self.mean
        return MomentSet(mu=lam, sigma2=lam**2, mu3=2 * lam**3, mu4=9 * lam**4)

    def log_variance(self):
        return 2 * math.log(self.mean)

    def _draw(self, rng, n):
        return rng.exponential(self.mean, size=n)


class Gamma(DistributionSpec):
    """
    Gamma with shape k and scale theta, mean k*theta.
    """

    family = "gamma"
    param_names = ("shape", "scale")

    def _validate(self):
        self._check_positive("shape", "scale")

    def support(self):
        return 0.0, math.inf

    def _scipy_dist(self):
        return scipy.stats.gamma(self.shape, scale=self.scale)

    def moments(self):
        """mu = k theta, sigma^2 = k theta^2, mu3 = 2 k theta^3, mu4 = 3 k (k + 2) theta^4"""
        k, theta = self.shape, self.scale
        return MomentSet(
            mu=k * theta, sigma2=k * theta**2, mu3=2 * k * theta**3, mu4=(3 * k**2 + 6 * k) * theta**4
        )

    def log_variance(self):
        return math.log(self.shape) + 2 * math.log(self.scale)

    def _draw(self, rng, n):
        # numpy uses Marsaglia-Tsang, with the U^(1/k) boost for shape < 1.
        return rng.gamma(self.shape, self.scale, size=n)


class Weibull(DistributionSpec):
    """
    Weibull with CDF 1 - exp(-(x/scale)^shape).
    """

    family = "weibull"
    param_names = ("shape", "scale")

    def _validate(self):
        self._check_positive("shape", "scale")

    def support(self):
        return 0.0, math.inf

    def _scipy_dist(self):
        return scipy.stats.weibull_min(self.shape, scale=self.scale)

    def raw_moment(self, r: int) -> float:
        """
        :return: E X^r = scale^r Gamma(1 + r/shape)
        """
        return self.scale**r * float(scipy.special.gamma(1.0 + r / self.shape))

    def moments(self):
        """central moments from the raw moments :func:`raw_moment`"""
        return MomentSet.from_raw(*[self.raw_moment(r) for r in range(1, 5)])

    def log_variance(self):
        """ln(scale^2 (Gamma(1 + 2/k) - Gamma(1 + 1/k)^2))"""
        g1 = scipy.special.gamma(1.0 + 1.0 / self.shape)
        g2 = scipy.special.gamma(1.0 + 2.0 / self.shape)
        return 2 * math.log(self.scale) + math.log(g2 - g1**2)

    def _draw(self, rng, n):
        return self.scale * rng.weibull(self.shape, size=n)


class LogNormal(DistributionSpec):
    """
    X = exp(Y) with Y ~ Normal(log_mean, log_sd^2).
    """

    family = "lognormal"
    param_names = ("log_mean", "log_sd")

    def _validate(self):
        value = self._params["log_mean"]
        if not (isinstance(value, (int, float, numpy.number)) and math.isfinite(value)):
            raise ParameterDomainError("lognormal: log_mean must be finite, got %r" % (value,))
        self._params["log_mean"] = float(value)
        self._check_positive("log_sd")

    def support(self):
        return 0.0, math.inf

    def _scipy_dist(self):
        return scipy.stats.lognorm(self.log_sd, scale=math.exp(self.log_mean))

    def log_variance(self):
        """
        ln sigma^2 = ln(e^{s^2} - 1) + 2m + s^2, finite also where sigma^2 itself overflows.
        """
        s2 = self.log_sd**2
        return log_expm1(s2) + 2 * self.log_mean + s2

    def moments(self):
        """moments, in log space where they get large"""
        s2 = self.log_sd**2
        log_var = self.log_variance()
        mu = _exp_or_inf(self.log_mean + s2 / 2)
        # mu3 = (w + 2) sqrt(w - 1) sigma^3, mu4 = (w^4 + 2w^3 + 3w^2 - 3) sigma^4, with w = e^{s^2}
        inv_w = math.exp(-s2)
        log_mu3 = s2 + math.log1p(2 * inv_w) + 0.5 * log_expm1(s2) + 1.5 * log_var
        log_mu4 = 4 * s2 + math.log1p(2 * inv_w + 3 * inv_w**2 - 3 * inv_w**4) + 2 * log_var
        return MomentSet(mu=mu, sigma2=_exp_or_inf(log_var), mu3=_exp_or_inf(log_mu3), mu4=_exp_or_inf(log_mu4))

    def _draw(self, rng, n):
        return rng.lognormal(self.log_mean, self.log_sd, size=n)


class Uniform(DistributionSpec):
    """
    Uniform on (lower, upper).
    """

    family = "uniform"
    param_names = ("lower", "upper")

    def _validate(self):
        lower, upper = self._params["lower"], self._params["upper"]
        if not all(isinstance(v, (int, float, numpy.number)) and math.isfinite(v) for v in (lower, upper)):
            raise ParameterDomainError("uniform: bounds must be finite, got %r, %r" % (lower, upper))
        if not lower < upper:
            raise ParameterDomainError("uniform: need lower < upper, got %r, %r" % (lower, upper))
        self._params["lower"], self._params["upper"] = float(lower), float(upper)

    def support(self):
        return self.lower, self.upper

    def _scipy_dist(self):
        return scipy.stats.uniform(loc=self.lower, scale=self.upper - self.lower)

    def moments(self):
        width = self.upper - self.lower
        return MomentSet(mu=(self.lower + self.upper) / 2, sigma2=width**2 / 12, mu3=0.0, mu4=width**4 / 80)

    def _draw(self, rng, n):
        return rng.uniform(self.lower, self.upper, size=n)


class GammaMixture(DistributionSpec):
    """
    Finite mixture of gamma distributions.
    ``components`` is a sequence of (weight, shape, scale).
    """

    family = "gamma_mixture"
    param_names = ("components",)

    def _validate(self):
        components = self._params["components"]
        if not isinstance(components, (list, tuple)) or not components:
            raise ParameterDomainError("gamma_mixture: components must be a non-empty list, got %r" % (components,))
        normed = []
        for comp in components:
            if not isinstance(comp, (list, tuple)) or len(comp) != 3:
                raise ParameterDomainError("gamma_mixture: component must be (weight, shape, scale), got %r" % (comp,))
            weight, shape, scale = comp
            for name, value in (("weight", weight), ("shape", shape), ("scale", scale)):
                if not (isinstance(value, (int, float, numpy.number)) and value > 0 and math.isfinite(value)):
                    raise ParameterDomainError("gamma_mixture: %s must be finite and > 0, got %r" % (name, value))
            normed.append((float(weight), float(shape), float(scale)))
        total = math.fsum(w for w, _, _ in normed)
        if abs(total - 1.0) > 1e-12:
            raise ParameterDomainError("gamma_mixture: weights must sum to 1, got %r" % (total,))
        self._params["components"] = tuple(normed)

    def to_dict(self):
        """for :func:`init_distribution`, JSON friendly"""
        return {"class": self.__class__.__name__, "components": [list(c) for c in self.components]}

    @property
    def weights(self) -> numpy.ndarray:
        """component weights, summing to 1"""
        return numpy.array([c[0] for c in self.components])

    def component_specs(self) -> Tuple[Gamma, ...]:
        """
        :return: the gamma components, without weights
        """
        return tuple(Gamma(shape=k, scale=theta) for _, k, theta in self.components)

    def support(self):
        return 0.0, math.inf

    def pdf(self, x):
        """weighted sum of the component densities"""
        x = numpy.asarray(x, dtype=float)
        return _maybe_scalar(sum(w * scipy.stats.gamma.pdf(x, k, scale=theta) for w, k, theta in self.components))

    def log_pdf(self, x):
        """logsumexp of the weighted component log densities"""
        x = numpy.asarray(x, dtype=float)
        terms = [math.log(w) + scipy.stats.gamma.logpdf(x, k, scale=theta) for w, k, theta in self.components]
        return _maybe_scalar(scipy.special.logsumexp(numpy.stack(terms), axis=0))

    def cdf(self, x):
        x = numpy.asarray(x, dtype=float)
        return _maybe_scalar(sum(w * scipy.stats.gamma.cdf(x, k, scale=theta) for w, k, theta in self.components))

    def quantile(self, p):
        """
        Inverse CDF by bracketed root finding.
        The mixture quantile lies between the smallest and largest component quantile.
        """
        _check_probability(p)
        p_arr = numpy.asarray(p, dtype=float)
        out = numpy.empty(p_arr.shape)
        for idx, p_ in numpy.ndenumerate(p_arr):
            comp_q = [scipy.stats.gamma.ppf(p_, k, scale=theta) for _, k, theta in self.components]
            lower, upper = min(comp_q), max(comp_q)
            if lower == upper:
                out[idx] = lower
                continue
            out[idx] = scipy.optimize.brentq(
                lambda x: self.cdf(x) - p_, lower, upper, xtol=1e-300, rtol=4 * numpy.finfo(float).eps
            )
        return _maybe_scalar(out)

    def moments(self):
        """from the weighted raw moments, E X^r = theta^r k (k+1) ... (k+r-1) per component"""
        raw = []
        for r in range(1, 5):
            raw.append(
                math.fsum(w * theta**r * math.prod(k + j for j in range(r)) for w, k, theta in self.components)
            )
        return MomentSet.from_raw(*raw)

    def _draw(self, rng, n):
        which = rng.choice(len(self.components), size=n, p=self.weights)
        shapes = numpy.array([c[1] for c in self.components])[which]
        scales = numpy.array([c[2] for c in self.components])[which]
        return rng.gamma(shapes, scales)

"""
Discrete families on the non-negative integers: :class:`Poisson` and :class:`Binomial`.

:func:`DistributionSpec.pdf` is the probability mass here,
and quantiles follow the left-continuous generalized inverse (smallest k with cdf(k) >= p).
"""

from __future__ import annotations

import math

import numpy
import scipy.stats

from dispersia.errors import ParameterDomainError
from .basic import DistributionSpec, MomentSet


class Poisson(DistributionSpec):
    """
    Poisson with the given mean.
    """

    family = "poisson"
    param_names = ("mean",)
    is_discrete = True

    def _validate(self):
        self._check_positive("mean")

    def support(self):
        return 0.0, math.inf

    def _scipy_dist(self):
        return scipy.stats.poisson(self.mean)

    def moments(self):
        """all cumulants equal the mean"""
        lam = self.mean
        return MomentSet(mu=lam, sigma2=lam, mu3=lam, mu4=3 * lam**2 + lam)

    def _draw(self, rng, n):
        # numpy: inversion for small means, PTRS transformed rejection otherwise
        return rng.poisson(self.mean, size=n)


class Binomial(DistributionSpec):
    """
    Binomial with ``size`` trials and success probability ``prob``.
    """

    family = "binomial"
    param_names = ("size", "prob")
    is_discrete = True

    def _validate(self):
        size, prob = self._params["size"], self._params["prob"]
        if isinstance(size, float) and size.is_integer():
            size = int(size)
        if not isinstance(size, (int, numpy.integer)) or isinstance(size, bool) or size < 1:
            raise ParameterDomainError("binomial: size must be an integer >= 1, got %r" % (size,))
        if not (isinstance(prob, (int, float, numpy.number)) and 0.0 < prob < 1.0):
            raise ParameterDomainError("binomial: prob must be in (0, 1), got %r" % (prob,))
        self._params["size"], self._params["prob"] = int(size), float(prob)

    def support(self):
        return 0.0, float(self.size)

    def _scipy_dist(self):
        return scipy.stats.binom(self.size, self.prob)

    def moments(self):
        m, p = self.size, self.prob
        q = 1.0 - p
        var = m * p * q
        return MomentSet(mu=m * p, sigma2=var, mu3=var * (q - p), mu4=3 * var**2 + var * (1 - 6 * p * q))

    def _draw(self, rng, n):
        return rng.binomial(self.size, self.prob, size=n)

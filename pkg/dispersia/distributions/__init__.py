"""
Distribution families, the special functions they rest on, and random streams.

The module-level functions :func:`moments`, :func:`pdf`, :func:`cdf`, :func:`quantile`
and :func:`sample` forward to the methods of :class:`DistributionSpec`.
"""

from .basic import DistributionSpec, MomentSet, init_distribution, get_distribution_class, family_names
from .continuous import Exponential, Gamma, Weibull, LogNormal, Uniform, GammaMixture
from .discrete import Poisson, Binomial
from .rng import RngStream, splitmix64


def moments(spec):
    """
    :param DistributionSpec spec:
    :rtype: MomentSet
    """
    return spec.moments()


def pdf(spec, x):
    """
    :param DistributionSpec spec:
    :param float|numpy.ndarray x:
    """
    return spec.pdf(x)


def log_pdf(spec, x):
    """
    :param DistributionSpec spec:
    :param float|numpy.ndarray x:
    """
    return spec.log_pdf(x)


def cdf(spec, x):
    """
    :param DistributionSpec spec:
    :param float|numpy.ndarray x:
    """
    return spec.cdf(x)


def quantile(spec, p):
    """
    :param DistributionSpec spec:
    :param float|numpy.ndarray p:
    """
    return spec.quantile(p)


def sample(spec, n, stream):
    """
    :param DistributionSpec spec:
    :param int n:
    :param RngStream stream:
    :rtype: numpy.ndarray
    """
    return spec.sample(n, stream)


def support(spec):
    """
    :param DistributionSpec spec:
    :rtype: (float, float)
    """
    return spec.support()


def log_variance(spec):
    """
    :param DistributionSpec spec:
    :rtype: float
    """
    return spec.log_variance()

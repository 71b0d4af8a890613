"""
This defines the base class :class:`DistributionSpec` and :class:`MomentSet`,
and the factory :func:`init_distribution`.
"""

from __future__ import annotations

import math
import typing
from dataclasses import dataclass
from typing import Dict, Optional, Tuple, Type, Union

import numpy

from dispersia.errors import DomainError, ParameterDomainError
from .rng import RngStream


@dataclass(frozen=True)
class MomentSet:
    """
    Population mean and the 2nd, 3rd and 4th central moments.
    """

    mu: float
    sigma2: float
    mu3: float
    mu4: float

    def __post_init__(self):
        if not (self.sigma2 > 0):
            raise ParameterDomainError("variance must be > 0, got %r" % (self.sigma2,))
        if math.isfinite(self.mu4) and self.mu4 < self.sigma2**2 * (1.0 - 1e-12):
            raise ParameterDomainError("mu4 = %r < sigma2^2 = %r" % (self.mu4, self.sigma2**2))

    @classmethod
    def from_raw(cls, m1, m2, m3, m4):
        """
        :param float m1: E X
        :param float m2: E X^2
        :param float m3: E X^3
        :param float m4: E X^4
        :rtype: MomentSet
        """
        var = m2 - m1**2
        mu3 = m3 - 3 * m1 * m2 + 2 * m1**3
        mu4 = m4 - 4 * m1 * m3 + 6 * m1**2 * m2 - 3 * m1**4
        return cls(mu=m1, sigma2=var, mu3=mu3, mu4=mu4)


class DistributionSpec:
    """
    Base class for a parameterized distribution family.
    Subclasses define :attr:`family`, :attr:`param_names`, validate their parameters,
    and provide density, CDF, quantile, exact moments and sampling.
    """

    family = None  # type: str
    param_names = ()  # type: Tuple[str, ...]
    is_discrete = False

    def __init__(self, **params):
        missing = [name for name in self.param_names if name not in params]
        unknown = [name for name in params if name not in self.param_names]
        if missing or unknown:
            raise ParameterDomainError(
                "%s: expected parameters %r, missing %r, unknown %r"
                % (self.__class__.__name__, self.param_names, missing, unknown)
            )
        self._params = {name: params[name] for name in self.param_names}
        self._validate()

    def _validate(self):
        raise NotImplementedError

    def _check_positive(self, *names):
        for name in names:
            value = self._params[name]
            if not (isinstance(value, (int, float, numpy.number)) and value > 0 and math.isfinite(value)):
                raise ParameterDomainError("%s: %s must be finite and > 0, got %r" % (self.family, name, value))
            self._params[name] = float(value)

    @property
    def params(self) -> Dict[str, typing.Any]:
        """
        :return: copy of the parameters, in the order of :attr:`param_names`
        """
        return dict(self._params)

    def to_dict(self) -> Dict[str, typing.Any]:
        """
        :return: dict usable for :func:`init_distribution`
        """
        d = {"class": self.__class__.__name__}
        d.update(self._params)
        return d

    def __getattr__(self, item):
        params = self.__dict__.get("_params")
        if params is not None and item in params:
            return params[item]
        raise AttributeError("%s has no attribute %r" % (self.__class__.__name__, item))

    def __getstate__(self):
        return {"_params": self._params}

    def __setstate__(self, state):
        self.__dict__.update(state)

    def __repr__(self):
        return "%s(%s)" % (self.__class__.__name__, ", ".join("%s=%r" % kv for kv in self._params.items()))

    def __eq__(self, other):
        return type(self) is type(other) and self._params == other._params

    def __hash__(self):
        return hash((type(self).__name__, repr(self._params)))

    def with_params(self, **updates) -> DistributionSpec:
        """
        :return: new spec of the same family with some parameters replaced
        """
        params = self.params
        params.update(updates)
        return self.__class__(**params)

    def support(self) -> Tuple[float, float]:
        """
        :return: (lower, upper) bounds of the support
        """
        raise NotImplementedError

    def _scipy_dist(self):
        """
        :return: frozen scipy.stats distribution, if the family has one
        """
        raise NotImplementedError

    def pdf(self, x):
        """
        Density, or probability mass for discrete families.

        :param float|numpy.ndarray x:
        :rtype: float|numpy.ndarray
        """
        d = self._scipy_dist()
        return _maybe_scalar(d.pmf(x) if self.is_discrete else d.pdf(x))

    def log_pdf(self, x):
        """
        :param float|numpy.ndarray x:
        :rtype: float|numpy.ndarray
        """
        d = self._scipy_dist()
        return _maybe_scalar(d.logpmf(x) if self.is_discrete else d.logpdf(x))

    def cdf(self, x):
        """
        :param float|numpy.ndarray x:
        :rtype: float|numpy.ndarray
        """
        return _maybe_scalar(self._scipy_dist().cdf(x))

    def quantile(self, p):
        """
        Inverse CDF. For discrete families, the smallest k with cdf(k) >= p.

        :param float|numpy.ndarray p: in (0, 1)
        :rtype: float|numpy.ndarray
        """
        _check_probability(p)
        return _maybe_scalar(self._scipy_dist().ppf(p))

    def moments(self) -> MomentSet:
        """
        :return: exact closed-form mean and central moments
        """
        raise NotImplementedError

    def log_variance(self) -> float:
        """
        :return: ln of the population variance
        """
        return math.log(self.moments().sigma2)

    def sample(self, n: int, stream: Union[RngStream, numpy.random.Generator]) -> numpy.ndarray:
        """
        :param n: number of draws, >= 1
        :param stream: a stream, or an already created generator
        :return: float64 array of shape (n,)
        """
        if n < 1:
            raise DomainError("n must be >= 1, got %r" % (n,))
        rng = stream.generator() if isinstance(stream, RngStream) else stream
        return numpy.asarray(self._draw(rng, int(n)), dtype=numpy.float64)

    def _draw(self, rng: numpy.random.Generator, n: int) -> numpy.ndarray:
        raise NotImplementedError


def _maybe_scalar(x):
    x = numpy.asarray(x)
    if x.ndim == 0:
        return float(x)
    return x


def _check_probability(p):
    p_arr = numpy.asarray(p, dtype=float)
    if not numpy.all((p_arr > 0.0) & (p_arr < 1.0)):
        raise DomainError("probability must be in (0, 1), got %r" % (p,))


_distribution_classes = {}  # type: Dict[str, Type[DistributionSpec]]


def get_distribution_class(name: Union[str, Type[DistributionSpec]]) -> Optional[Type[DistributionSpec]]:
    """
    :param name: class name like "LogNormal" or family tag like "lognormal"
    """
    if isinstance(name, type):
        assert issubclass(name, DistributionSpec)
        return name

    if not _distribution_classes:
        from importlib import import_module

        for mod_name in ["continuous", "discrete"]:
            mod = import_module("dispersia.distributions.%s" % mod_name)
            for name_, clazz in vars(mod).items():
                if not isinstance(clazz, type) or not issubclass(clazz, DistributionSpec) or not clazz.family:
                    continue
                _distribution_classes[name_] = clazz
                _distribution_classes[clazz.family] = clazz

    return _distribution_classes.get(name, None)


def family_names():
    """
    :return: all family tags, e.g. ["exponential", "gamma", ...]
    :rtype: list[str]
    """
    get_distribution_class("gamma")  # fill registry
    return sorted({clazz.family for clazz in _distribution_classes.values()})


def init_distribution(kwargs) -> DistributionSpec:
    """
    :param dict[str]|DistributionSpec kwargs: e.g. ``{"class": "Gamma", "shape": 2.0, "scale": 3.0}``
    :rtype: DistributionSpec
    """
    if isinstance(kwargs, DistributionSpec):
        return kwargs
    if not isinstance(kwargs, dict) or "class" not in kwargs:
        raise ParameterDomainError("expected dict with 'class' entry, got %r" % (kwargs,))
    kwargs = dict(kwargs)
    clazz_name = kwargs.pop("class")
    clazz = get_distribution_class(clazz_name)
    if not clazz:
        raise ParameterDomainError("distribution class %r not found" % (clazz_name,))
    return clazz(**kwargs)

import sys
import math
import pickle
import unittest

import tests.setup_test_env  # noqa
import better_exchook
import numpy
import pytest
import scipy.integrate
from numpy.testing import assert_allclose

from dispersia.distributions import (
    Binomial,
    Exponential,
    Gamma,
    GammaMixture,
    LogNormal,
    MomentSet,
    Poisson,
    RngStream,
    Uniform,
    Weibull,
    family_names,
    get_distribution_class,
    init_distribution,
    log_variance,
    moments,
    quantile,
    sample,
    support,
)
from dispersia.errors import DomainError, ParameterDomainError
from dispersia.simulation import build_gamma_mixture


def _empirical_check(spec, n=200000, seed=1, sigmas=5.0):
    x = spec.sample(n, RngStream(master_seed=seed, stream_index=0))
    m = spec.moments()
    assert abs(x.mean() - m.mu) < sigmas * math.sqrt(m.sigma2 / n)
    assert abs(x.var() - m.sigma2) < sigmas * math.sqrt((m.mu4 - m.sigma2**2) / n)


def test_moment_set_from_raw_exponential():
    # E X^r = r! for the unit exponential
    m = MomentSet.from_raw(1.0, 2.0, 6.0, 24.0)
    assert_allclose([m.mu, m.sigma2, m.mu3, m.mu4], [1.0, 1.0, 2.0, 9.0], rtol=1e-14)


def test_moment_set_invalid():
    with pytest.raises(ParameterDomainError):
        MomentSet(mu=1.0, sigma2=0.0, mu3=0.0, mu4=1.0)
    with pytest.raises(ParameterDomainError):
        MomentSet(mu=1.0, sigma2=2.0, mu3=0.0, mu4=1.0)


def test_closed_form_moments():
    m = Exponential(mean=2.0).moments()
    assert (m.mu, m.sigma2, m.mu3, m.mu4) == (2.0, 4.0, 16.0, 144.0)
    m = Gamma(shape=2.0, scale=3.0).moments()
    assert_allclose([m.mu, m.sigma2, m.mu3, m.mu4], [6.0, 18.0, 108.0, 24 * 81.0], rtol=1e-14)
    m = Poisson(mean=3.0).moments()
    assert (m.mu, m.sigma2, m.mu3, m.mu4) == (3.0, 3.0, 3.0, 30.0)
    m = Binomial(size=10, prob=0.5).moments()
    assert_allclose([m.mu, m.sigma2, m.mu3, m.mu4], [5.0, 2.5, 0.0, 3 * 2.5**2 + 2.5 * (1 - 1.5)], rtol=1e-14)
    m = Uniform(lower=0.0, upper=1.0).moments()
    assert_allclose([m.mu, m.sigma2, m.mu3, m.mu4], [0.5, 1 / 12.0, 0.0, 1 / 80.0], rtol=1e-14)


def test_weibull_shape1_is_exponential():
    m = Weibull(shape=1.0, scale=2.0).moments()
    e = Exponential(mean=2.0).moments()
    assert_allclose([m.mu, m.sigma2, m.mu3, m.mu4], [e.mu, e.sigma2, e.mu3, e.mu4], rtol=1e-12)


def test_lognormal_moments():
    spec = LogNormal(log_mean=0.0, log_sd=0.5)
    w = math.exp(0.25)
    m = spec.moments()
    var = (w - 1) * w
    assert_allclose(m.mu, math.sqrt(w), rtol=1e-14)
    assert_allclose(m.sigma2, var, rtol=1e-13)
    assert_allclose(m.mu3, (w + 2) * math.sqrt(w - 1) * var**1.5, rtol=1e-12)
    assert_allclose(m.mu4, (w**4 + 2 * w**3 + 3 * w**2 - 3) * var**2, rtol=1e-12)


def test_lognormal_log_variance_without_overflow():
    spec = LogNormal(log_mean=1.0, log_sd=20.0)
    assert math.isfinite(log_variance(spec))
    assert_allclose(spec.log_variance(), 2 * 400.0 + 2.0, rtol=1e-12)
    assert spec.moments().sigma2 == math.inf


def test_empirical_moments_match():
    for spec in [
        Exponential(mean=3.0),
        Gamma(shape=0.5, scale=2.0),
        Weibull(shape=2.0, scale=5.0),
        LogNormal(log_mean=1.0, log_sd=0.3),
        Poisson(mean=4.0),
        Binomial(size=20, prob=0.3),
        Uniform(lower=-1.0, upper=2.0),
        build_gamma_mixture([1.0, 5.0, 9.0], 1.0),
    ]:
        print(spec)
        _empirical_check(spec)


def test_cdf_quantile_inverse():
    for spec in [Exponential(mean=2.0), Gamma(shape=3.0, scale=0.5), Weibull(shape=0.7, scale=2.0)]:
        p = numpy.array([0.01, 0.3, 0.5, 0.9, 0.999])
        assert_allclose(spec.cdf(quantile(spec, p)), p, rtol=1e-10)


def test_discrete_quantile_generalized_inverse():
    spec = Poisson(mean=2.0)
    for p in [0.1, 0.5, 0.9]:
        k = spec.quantile(p)
        assert k == int(k)
        assert spec.cdf(k) >= p
        assert k == 0 or spec.cdf(k - 1) < p


def test_quantile_domain():
    with pytest.raises(DomainError):
        Exponential(mean=1.0).quantile(0.0)
    with pytest.raises(DomainError):
        Gamma(shape=1.0, scale=1.0).quantile(numpy.array([0.5, 1.0]))


def test_pdf_and_log_pdf():
    spec = Exponential(mean=2.0)
    assert_allclose(spec.pdf(0.0), 0.5)
    assert_allclose(spec.log_pdf(2.0), math.log(0.5) - 1.0)
    assert_allclose(Poisson(mean=1.0).pdf(0), math.exp(-1.0))


def test_gamma_mixture():
    mix = build_gamma_mixture([1.0, 5.0, 9.0], 1.0)
    assert isinstance(mix, GammaMixture)
    assert_allclose(mix.weights.sum(), 1.0)
    for comp in mix.component_specs():
        m = comp.moments()
        assert_allclose(m.sigma2, 1.0, rtol=1e-12)
    modes = [(k - 1) * theta for _, k, theta in mix.components]
    assert_allclose(modes, [1.0, 5.0, 9.0], rtol=1e-12)
    assert_allclose(mix.cdf(mix.quantile(0.5)), 0.5, rtol=1e-10)
    x = numpy.array([0.5, 5.0, 12.0])
    assert_allclose(numpy.exp(mix.log_pdf(x)), mix.pdf(x), rtol=1e-12)


def test_gamma_mixture_invalid():
    with pytest.raises(ParameterDomainError):
        GammaMixture(components=[(0.5, 1.0, 1.0), (0.4, 2.0, 1.0)])
    with pytest.raises(ParameterDomainError):
        GammaMixture(components=[])


def test_invalid_params():
    with pytest.raises(ParameterDomainError):
        Exponential(mean=0.0)
    with pytest.raises(ParameterDomainError):
        Gamma(shape=-1.0, scale=1.0)
    with pytest.raises(ParameterDomainError):
        Gamma(shape=1.0)
    with pytest.raises(ParameterDomainError):
        Weibull(shape=1.0, scale=1.0, loc=0.0)
    with pytest.raises(ParameterDomainError):
        Binomial(size=2.5, prob=0.5)
    with pytest.raises(ParameterDomainError):
        Binomial(size=10, prob=1.0)
    with pytest.raises(ParameterDomainError):
        LogNormal(log_mean=float("inf"), log_sd=1.0)
    with pytest.raises(ParameterDomainError):
        Uniform(lower=1.0, upper=1.0)


def test_binomial_integral_float_size():
    spec = Binomial(size=10.0, prob=0.2)
    assert spec.size == 10 and isinstance(spec.size, int)
    assert support(spec) == (0.0, 10.0)


def test_sample_reproducible():
    spec = Gamma(shape=2.0, scale=3.0)
    stream = RngStream(master_seed=42, stream_index=3)
    x1 = sample(spec, 100, stream)
    x2 = spec.sample(100, stream)
    assert x1.dtype == numpy.float64 and x1.shape == (100,)
    assert (x1 == x2).all()
    with pytest.raises(DomainError):
        spec.sample(0, stream)


def test_init_distribution():
    spec = init_distribution({"class": "Gamma", "shape": 2, "scale": 3})
    assert spec == Gamma(shape=2.0, scale=3.0)
    assert init_distribution(spec) is spec
    assert init_distribution({"class": "gamma", "shape": 2, "scale": 3}) == spec
    assert init_distribution(spec.to_dict()) == spec
    mix = build_gamma_mixture([1.0, 5.0], 1.0)
    assert init_distribution(mix.to_dict()) == mix
    with pytest.raises(ParameterDomainError):
        init_distribution({"class": "Cauchy"})
    with pytest.raises(ParameterDomainError):
        init_distribution({"shape": 1})


def test_registry():
    assert get_distribution_class("LogNormal") is LogNormal
    assert get_distribution_class("lognormal") is LogNormal
    assert get_distribution_class("nonexistent") is None
    assert "gamma_mixture" in family_names()
    assert {"exponential", "gamma", "weibull", "lognormal", "poisson", "binomial"} <= set(family_names())


def test_spec_value_semantics():
    a = Weibull(shape=2.0, scale=1.0)
    b = pickle.loads(pickle.dumps(a))
    assert a == b and hash(a) == hash(b)
    assert a.with_params(scale=2.0) == Weibull(shape=2.0, scale=2.0)
    assert a.params == {"shape": 2.0, "scale": 1.0}
    assert moments(a) == a.moments()
    assert "Weibull" in repr(a)


MomentOraclePoints = {
    Exponential: [dict(mean=m) for m in (0.3, 1.0, 2.5, 10.0, 100.0)],
    Gamma: [
        dict(shape=0.5, scale=2.0),
        dict(shape=1.0, scale=1.0),
        dict(shape=2.0, scale=3.0),
        dict(shape=9.8663, scale=91.0873),
        dict(shape=25.0, scale=0.1),
    ],
    Weibull: [
        dict(shape=0.8, scale=1.0),
        dict(shape=1.5, scale=2.0),
        dict(shape=2.0, scale=0.5),
        dict(shape=3.0, scale=10.0),
        dict(shape=5.0, scale=1.0),
    ],
    LogNormal: [
        dict(log_mean=0.0, log_sd=0.25),
        dict(log_mean=1.0, log_sd=0.5),
        dict(log_mean=-1.0, log_sd=1.0),
        dict(log_mean=2.0, log_sd=0.8),
        dict(log_mean=0.5, log_sd=1.0),
    ],
    Poisson: [dict(mean=m) for m in (0.5, 1.0, 3.0, 10.0, 50.0)],
    Binomial: [
        dict(size=1, prob=0.5),
        dict(size=5, prob=0.1),
        dict(size=10, prob=0.3),
        dict(size=20, prob=0.8),
        dict(size=50, prob=0.5),
    ],
}


def _expectation_by_quadrature(spec, g, epsabs):
    """
    E g(X) for X > 0, integrated over y = ln x, split at the median.
    """

    def integrand(y):
        if abs(y) > 700.0:
            return 0.0
        x = math.exp(y)
        return g(x) * spec.pdf(x) * x

    split = math.log(float(spec.quantile(0.5)))
    kwargs = dict(epsabs=epsabs, epsrel=1e-11, limit=500)
    lower, _ = scipy.integrate.quad(integrand, -numpy.inf, split, **kwargs)
    upper, _ = scipy.integrate.quad(integrand, split, numpy.inf, **kwargs)
    return lower + upper


def _expectation_by_summation(spec, g):
    upper = spec.support()[1]
    if not math.isfinite(upper):
        upper = float(spec.quantile(1 - 1e-15)) + 50
    ks = numpy.arange(0, int(upper) + 1)
    return math.fsum(g(k) * p for k, p in zip(ks, spec.pdf(ks)))


def _moments_oracle(spec, sigma):
    """
    :return: mean and 2nd to 4th central moments, by numerical integration or summation
    """
    if spec.is_discrete:
        mu = _expectation_by_summation(spec, lambda x: x)
        return [mu] + [_expectation_by_summation(spec, lambda x, k=k: (x - mu) ** k) for k in (2, 3, 4)]
    mu = _expectation_by_quadrature(spec, lambda x: x, epsabs=1e-14 * sigma)
    return [mu] + [
        _expectation_by_quadrature(spec, lambda x, k=k: (x - mu) ** k, epsabs=1e-14 * sigma**k) for k in (2, 3, 4)
    ]


def test_moments_match_numerical_integration():
    for clazz, points in MomentOraclePoints.items():
        for params in points:
            spec = clazz(**params)
            m = spec.moments()
            sigma = math.sqrt(m.sigma2)
            oracle = _moments_oracle(spec, sigma)
            print(spec, [m.mu, m.sigma2, m.mu3, m.mu4], oracle)
            for k, (value, expected) in enumerate(zip([m.mu, m.sigma2, m.mu3, m.mu4], oracle)):
                assert_allclose(value, expected, rtol=1e-6, atol=1e-9 * sigma ** max(k, 1), err_msg=str(spec))


def test_gamma_mixture_density():
    mix = build_gamma_mixture([1.0, 5.0, 9.0], 1.0)
    total = 0.0
    for lower, upper in ((0.0, 1.0), (1.0, 5.0), (5.0, 9.0), (9.0, 30.0), (30.0, numpy.inf)):
        value, _ = scipy.integrate.quad(mix.pdf, lower, upper, epsabs=1e-13, epsrel=1e-11, limit=200)
        total += value
    assert_allclose(total, 1.0, rtol=1e-8)
    h = 1e-5
    for comp, mode in zip(mix.component_specs(), [1.0, 5.0, 9.0]):
        slope = (comp.pdf(mode + h) - comp.pdf(mode - h)) / (2 * h)
        assert abs(slope) < 1e-6 * comp.pdf(mode)
        assert comp.pdf(mode) > comp.pdf(mode * 0.9) and comp.pdf(mode) > comp.pdf(mode * 1.1)


if __name__ == "__main__":
    better_exchook.install()
    if len(sys.argv) <= 1:
        for k, v in sorted(globals().items()):
            if k.startswith("test_"):
                print("-" * 40)
                print("Executing: %s" % k)
                try:
                    v()
                except unittest.SkipTest as exc:
                    print("SkipTest:", exc)
                print("-" * 40)
        print("Finished all tests.")
    else:
        assert len(sys.argv) >= 2
        for arg in sys.argv[1:]:
            print("Executing: %s" % arg)
            if arg in globals():
                globals()[arg]()  # assume function and execute
            else:
                eval(arg)  # assume Python code and execute

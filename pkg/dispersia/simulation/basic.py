"""
Value types of Monte Carlo experiments, and the helpers they are built from.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy

from dispersia.distributions import DistributionSpec, GammaMixture, RngStream, get_distribution_class, splitmix64
from dispersia.distributions import init_distribution
from dispersia.distributions.special import chi2_quantile
from dispersia.errors import ConfigError, DomainError, ParameterDomainError

Sided = ("two_sided_equal_tail",)
FailureFlagFraction = 0.001
_MAX_INDEX = 1 << 32


@dataclass(frozen=True)
class ExperimentConfig:
    """
    Declarative Monte Carlo experiment.

    Each cell draws ``replicates`` samples of size n from a true model, fits ``family`` by MLE,
    and computes D with the plug-in variance.
    The true model is ``family`` with ``grid_param`` set to each value of ``parameter_grid``
    (and ``fixed_params`` for the others), unless ``true_distribution`` is given.
    """

    family: str
    parameter_grid: Tuple[float, ...] = ()
    fixed_params: Dict[str, Any] = field(default_factory=dict)
    sample_sizes: Tuple[int, ...] = ()
    replicates: int = 10000
    master_seed: int = 42
    level: float = 0.05
    sided: str = "two_sided_equal_tail"
    grid_param: Optional[str] = None
    true_distribution: Optional[Dict[str, Any]] = None
    label: Optional[str] = None
    stream_offset: int = 0

    def __post_init__(self):
        clazz = get_distribution_class(self.family)
        if clazz is None or clazz is GammaMixture:
            raise ConfigError("unknown or unfittable family %r" % (self.family,), key_path="family")
        object.__setattr__(self, "family", clazz.family)
        try:
            object.__setattr__(self, "parameter_grid", tuple(float(v) for v in self.parameter_grid))
        except (TypeError, ValueError) as exc:
            raise ConfigError("must be a list of numbers", key_path="parameter_grid") from exc
        object.__setattr__(self, "sample_sizes", tuple(self.sample_sizes))
        if not self.parameter_grid and self.true_distribution is None:
            raise ConfigError("must not be empty", key_path="parameter_grid")
        if not self.sample_sizes:
            raise ConfigError("must not be empty", key_path="sample_sizes")
        for i, n in enumerate(self.sample_sizes):
            if not isinstance(n, int) or isinstance(n, bool) or n < 2:
                raise ConfigError("must be an integer >= 2, got %r" % (n,), key_path="sample_sizes[%i]" % i)
        if not isinstance(self.replicates, int) or isinstance(self.replicates, bool) or self.replicates < 1:
            raise ConfigError("must be an integer >= 1, got %r" % (self.replicates,), key_path="replicates")
        if self.replicates >= _MAX_INDEX:
            raise ConfigError("must be < 2^32, got %r" % (self.replicates,), key_path="replicates")
        if not isinstance(self.master_seed, int) or not (0 <= self.master_seed < 2**64):
            raise ConfigError("must be a 64-bit unsigned int, got %r" % (self.master_seed,), key_path="master_seed")
        if not (isinstance(self.level, (int, float)) and 0.0 < self.level < 1.0):
            raise ConfigError("must be in (0, 1), got %r" % (self.level,), key_path="level")
        if self.sided not in Sided:
            raise ConfigError("must be one of %r, got %r" % (Sided, self.sided), key_path="sided")
        for key in self.fixed_params:
            if key not in clazz.param_names:
                raise ConfigError("not a parameter of %s" % clazz.family, key_path="fixed_params.%s" % key)
        if self.parameter_grid:
            grid_param = self.grid_param
            if grid_param is None:
                free = [name for name in clazz.param_names if name not in self.fixed_params]
                if len(free) != 1:
                    raise ConfigError("cannot infer the grid parameter from %r" % (free,), key_path="grid_param")
                grid_param = free[0]
                object.__setattr__(self, "grid_param", grid_param)
            if grid_param not in clazz.param_names or grid_param in self.fixed_params:
                raise ConfigError("invalid grid parameter %r" % (grid_param,), key_path="grid_param")
        try:
            for spec in self.true_specs():
                spec.moments()
        except ParameterDomainError as exc:
            key = "true_distribution" if self.true_distribution is not None else "parameter_grid"
            raise ConfigError(str(exc), key_path=key) from exc

    def true_specs(self) -> List[DistributionSpec]:
        """
        :return: the true models, one per grid value, or the single true_distribution
        """
        if self.true_distribution is not None:
            return [init_distribution(self.true_distribution)]
        clazz = get_distribution_class(self.family)
        return [clazz(**dict(self.fixed_params, **{self.grid_param: value})) for value in self.parameter_grid]

    def fit_size(self) -> Optional[int]:
        """
        :return: number of trials for a binomial fit
        """
        if self.family != "binomial":
            return None
        size = self.fixed_params.get("size")
        if size is None and self.true_distribution is not None:
            size = self.true_distribution.get("size")
        return int(size) if size is not None else None

    def cells(self) -> List[Tuple[int, DistributionSpec, int]]:
        """
        :return: (cell index, true spec, n), n varying slowest
        """
        specs = self.true_specs()
        res = []
        for n in self.sample_sizes:
            for spec in specs:
                res.append((self.stream_offset + len(res), spec, n))
        return res

    def cutoffs(self, n: int) -> Tuple[float, float]:
        """
        :return: equal-tail chi-square(n-1) cutoffs at the configured level
        """
        return chi2_quantile(n - 1, self.level / 2), chi2_quantile(n - 1, 1.0 - self.level / 2)


@dataclass
class ExperimentCell:
    """
    Outcome of one (true model, n) cell.
    ``d_values`` holds D per replicate in replicate order, NaN where the fit failed.
    """

    family: str
    true_spec: DistributionSpec
    n: int
    replicates: int
    empirical_mean_d: float
    empirical_var_d: float
    rejection_count: int
    n_failed: int
    flagged: bool
    d_values: numpy.ndarray = field(repr=False, compare=False)

    @property
    def params(self) -> Dict[str, Any]:
        """parameters of the true model"""
        return self.true_spec.params

    @property
    def n_ok(self) -> int:
        """replicates with successful fit"""
        return self.replicates - self.n_failed

    @property
    def rejection_rate(self) -> float:
        """rejections among successful replicates"""
        return self.rejection_count / self.n_ok if self.n_ok else math.nan

    @classmethod
    def from_d_values(
        cls, family: str, true_spec: DistributionSpec, n: int, d_values: numpy.ndarray, cutoffs: Tuple[float, float]
    ) -> ExperimentCell:
        """
        Aggregates in replicate order, with compensated summation, so the result does not depend on scheduling.
        """
        ok = d_values[~numpy.isnan(d_values)]
        n_failed = len(d_values) - len(ok)
        mean, var = _mean_var(ok)
        lower, upper = cutoffs
        return cls(
            family=family,
            true_spec=true_spec,
            n=n,
            replicates=len(d_values),
            empirical_mean_d=mean,
            empirical_var_d=var,
            rejection_count=int(numpy.count_nonzero((ok < lower) | (ok > upper))),
            n_failed=n_failed,
            flagged=n_failed > FailureFlagFraction * len(d_values),
            d_values=d_values,
        )


@dataclass
class ExperimentSummary:
    """
    All cells of an experiment, in cell index order.
    """

    cells: List[ExperimentCell]
    master_seed: int
    label: Optional[str] = None


@dataclass(frozen=True)
class McStandardErrors:
    """
    Monte Carlo standard errors of a cell.
    """

    mean: float
    variance: float
    rejection_rate: float


def _mean_var(values: Sequence[float]) -> Tuple[float, float]:
    if len(values) == 0:
        return math.nan, math.nan
    mean = math.fsum(values) / len(values)
    if len(values) < 2:
        return mean, math.nan
    var = math.fsum((numpy.asarray(values) - mean) ** 2) / (len(values) - 1)
    return mean, var


def mc_standard_errors(cell: ExperimentCell) -> McStandardErrors:
    """
    sqrt(var/R) for the mean, sqrt((m4 - var^2)/R) for the variance, sqrt(r(1-r)/R) for the rejection rate.
    """
    ok = cell.d_values[~numpy.isnan(cell.d_values)]
    r = len(ok)
    if r < 2:
        return McStandardErrors(mean=math.nan, variance=math.nan, rejection_rate=math.nan)
    mean, var = _mean_var(ok)
    m4 = math.fsum((ok - mean) ** 4) / r
    rate = cell.rejection_rate
    return McStandardErrors(
        mean=math.sqrt(var / r),
        variance=math.sqrt(max(m4 - var**2, 0.0) / r),
        rejection_rate=math.sqrt(rate * (1 - rate) / r),
    )


def derive_stream_seed(master_seed: int, cell_index: int, replicate_index: int) -> RngStream:
    """
    :param master_seed: 64-bit unsigned
    :param cell_index: < 2^32
    :param replicate_index: < 2^32
    :return: stream, injective in (cell_index, replicate_index) for a fixed master seed
    """
    if not (0 <= cell_index < _MAX_INDEX and 0 <= replicate_index < _MAX_INDEX):
        raise DomainError("cell and replicate index must be in [0, 2^32), got %r, %r" % (cell_index, replicate_index))
    return RngStream(master_seed=master_seed, stream_index=splitmix64((cell_index << 32) | replicate_index))


def build_gamma_mixture(
    modes: Sequence[float], component_variance: float = 1.0, weights: Optional[Sequence[float]] = None
) -> GammaMixture:
    """
    Gamma mixture whose components have the given modes and a common variance v.
    With mode (a-1) b = m and variance a b^2 = v, the shape a is the root > 1 of
    v a^2 - (2v + m^2) a + v = 0, and the scale b = m / (a-1).

    :param modes: > 0
    :param component_variance: > 0
    :param weights: default equal weights
    """
    if not modes:
        raise ParameterDomainError("need at least one mode")
    v = component_variance
    if not (v > 0):
        raise ParameterDomainError("component variance must be > 0, got %r" % (v,))
    if weights is None:
        weights = [1.0 / len(modes)] * len(modes)
    if len(weights) != len(modes):
        raise ParameterDomainError("got %i weights for %i modes" % (len(weights), len(modes)))
    components = []
    for weight, m in zip(weights, modes):
        if not (m > 0):
            raise ParameterDomainError("mode must be > 0, got %r" % (m,))
        b = 2 * v + m * m
        shape = (b + math.sqrt(b * b - 4 * v * v)) / (2 * v)
        if not shape > 1:
            raise ParameterDomainError("no shape > 1 for mode %r and variance %r" % (m, v))
        components.append((weight, shape, m / (shape - 1)))
    return GammaMixture(components=components)


def config_to_dict(config: ExperimentConfig) -> Dict[str, Any]:
    """
    :return: JSON-friendly dict, as accepted by :func:`dispersia.config.parse_config`
    """
    d = {
        "family": config.family,
        "parameter_grid": list(config.parameter_grid),
        "fixed_params": dict(config.fixed_params),
        "sample_sizes": list(config.sample_sizes),
        "replicates": config.replicates,
        "master_seed": config.master_seed,
        "level": config.level,
        "sided": config.sided,
    }
    if config.grid_param is not None:
        d["grid_param"] = config.grid_param
    if config.true_distribution is not None:
        d["true_distribution"] = dict(config.true_distribution)
    return d

"""
Predefined experiments: the seven rows of the table of means and variances of D,
and the false rejection / false acceptance scenarios.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Sequence, Tuple

from dispersia.errors import ConfigError
from .basic import ExperimentConfig, build_gamma_mixture

Table1Grid = (1.0, 5.0, 10.0, 15.0, 20.0)
Table1SampleSizes = (100, 200)
RowStreamStride = 1000


@dataclass(frozen=True)
class Table1Row:
    """
    One row: ``family`` with ``grid_param`` running over ``grid`` and ``fixed_params`` held.
    """

    label: str
    family: str
    grid_param: str
    fixed_params: Dict[str, Any]
    grid: Tuple[float, ...] = Table1Grid


TABLE1_ROWS = (
    Table1Row("Exponential (mean=parameter)", "exponential", "mean", {}),
    Table1Row("Gamma (scale=2, shape=parameter)", "gamma", "shape", {"scale": 2.0}),
    Table1Row("Gamma (shape=2, scale=parameter)", "gamma", "scale", {"shape": 2.0}),
    Table1Row("Lognormal (location=parameter, scale=2)", "lognormal", "log_mean", {"log_sd": 2.0}),
    Table1Row("Lognormal (scale=parameter, location=1)", "lognormal", "log_sd", {"log_mean": 1.0}),
    Table1Row("Weibull (shape=2, scale=parameter)", "weibull", "scale", {"shape": 2.0}),
    Table1Row(
        "Weibull (scale=1, shape=parameter/5)", "weibull", "shape", {"scale": 1.0}, tuple(t / 5 for t in Table1Grid)
    ),
)


def table1_configs(
    replicates: int = 10000, master_seed: int = 42, sample_sizes: Sequence[int] = Table1SampleSizes
) -> List[ExperimentConfig]:
    """
    :return: one config per row of :data:`TABLE1_ROWS`, with disjoint cell indices
    """
    return [
        ExperimentConfig(
            family=row.family,
            parameter_grid=row.grid,
            fixed_params=dict(row.fixed_params),
            sample_sizes=tuple(sample_sizes),
            replicates=replicates,
            master_seed=master_seed,
            grid_param=row.grid_param,
            label=row.label,
            stream_offset=i * RowStreamStride,
        )
        for i, row in enumerate(TABLE1_ROWS)
    ]


def _false_reject() -> ExperimentConfig:
    return ExperimentConfig(
        family="gamma",
        true_distribution={"class": "Gamma", "shape": 0.5, "scale": 2.0},
        sample_sizes=(100,),
        replicates=100000,
        level=0.05,
        label="false rejection: gamma(shape=0.5, scale=2) data, gamma fit",
    )


def _false_accept() -> ExperimentConfig:
    return ExperimentConfig(
        family="gamma",
        true_distribution=build_gamma_mixture([1.0, 5.0, 9.0], 1.0).to_dict(),
        sample_sizes=(30,),
        replicates=100000,
        level=0.05,
        label="false acceptance: gamma mixture (modes 1, 5, 9) data, gamma fit",
    )


RejectionScenarios = {"mooley-false-reject": _false_reject, "mooley-false-accept": _false_accept}


def rejection_preset(
    name: str, replicates: Optional[int] = None, master_seed: Optional[int] = None
) -> ExperimentConfig:
    """
    :param name: "mooley-false-reject" or "mooley-false-accept"
    :param replicates: overrides the preset 100000
    :param master_seed: overrides the default
    """
    if name not in RejectionScenarios:
        raise ConfigError("unknown scenario %r, expected one of %r" % (name, sorted(RejectionScenarios)), "scenario")
    config = RejectionScenarios[name]()
    updates = {}
    if replicates is not None:
        updates["replicates"] = replicates
    if master_seed is not None:
        updates["master_seed"] = master_seed
    return dataclasses.replace(config, **updates) if updates else config

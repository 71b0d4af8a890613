"""
Runs Monte Carlo experiments, optionally with a pool of worker processes.

Every replicate has its own random stream (:func:`derive_stream_seed`),
and results are reassembled in replicate order,
so the outcome is bit-identical for any number of workers.
"""

from __future__ import annotations

import dataclasses
import math
import multiprocessing as mp
import time
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy

from dispersia.distributions import DistributionSpec, init_distribution
from dispersia.errors import ConfigError, ConvergenceError, DataError
from dispersia.fitting import fit_mle
from dispersia.log import log
from dispersia.util.basic import format_params, hms
from dispersia.vartest import statistic_d_from_fit
from .basic import ExperimentCell, ExperimentConfig, ExperimentSummary, derive_stream_seed

_mp = mp.get_context("spawn")

ChunksPerWorker = 4

# (cell_index, true spec dict, fit family, fit size, n, first replicate, end replicate, master seed)
_ChunkTask = Tuple[int, Dict[str, Any], str, Optional[int], int, int, int, int]


def simulate_d(
    true_spec: DistributionSpec,
    fit_family: str,
    n: int,
    master_seed: int,
    cell_index: int,
    replicates: Sequence[int],
    fit_size: Optional[int] = None,
) -> numpy.ndarray:
    """
    :return: D per replicate, NaN where the fit failed
    """
    out = numpy.empty(len(replicates))
    for i, rep in enumerate(replicates):
        x = true_spec.sample(n, derive_stream_seed(master_seed, cell_index, rep))
        try:
            fit = fit_mle(fit_family, x, size=fit_size)
        except (ConvergenceError, DataError) as exc:
            print("cell %i replicate %i: fit failed: %s" % (cell_index, rep, exc), file=log.v5)
            out[i] = math.nan
            continue
        out[i] = statistic_d_from_fit(x, fit)
    return out


def _run_chunk(task: _ChunkTask) -> numpy.ndarray:
    cell_index, spec_dict, fit_family, fit_size, n, start, end, master_seed = task
    spec = init_distribution(spec_dict)
    return simulate_d(spec, fit_family, n, master_seed, cell_index, range(start, end), fit_size=fit_size)


def _make_tasks(config: ExperimentConfig, cells, num_workers: int) -> List[_ChunkTask]:
    chunk_size = max(1, math.ceil(config.replicates / (num_workers * ChunksPerWorker)))
    tasks = []
    for cell_index, spec, n in cells:
        for start in range(0, config.replicates, chunk_size):
            end = min(start + chunk_size, config.replicates)
            tasks.append(
                (cell_index, spec.to_dict(), config.family, config.fit_size(), n, start, end, config.master_seed)
            )
    return tasks


def run_cells(
    config: ExperimentConfig, cells: List[Tuple[int, DistributionSpec, int]], num_workers: int = 1
) -> List[ExperimentCell]:
    """
    :param config:
    :param cells: (cell index, true spec, n), as from :func:`ExperimentConfig.cells`
    :param num_workers: <= 1 runs in this process
    """
    start_time = time.time()
    tasks = _make_tasks(config, cells, max(num_workers, 1))
    if num_workers > 1:
        print("Run %i chunks on %i workers." % (len(tasks), num_workers), file=log.v4)
        with _mp.Pool(num_workers) as pool:
            chunks = pool.map(_run_chunk, tasks)
    else:
        chunks = [_run_chunk(task) for task in tasks]

    by_cell = {}  # type: Dict[int, List[numpy.ndarray]]
    for task, chunk in zip(tasks, chunks):
        by_cell.setdefault(task[0], []).append(chunk)
    res = []
    for cell_index, spec, n in cells:
        d_values = numpy.concatenate(by_cell[cell_index])
        cell = ExperimentCell.from_d_values(config.family, spec, n, d_values, config.cutoffs(n))
        desc = "%s(%s), n=%i" % (spec.family, format_params(spec.params), n)
        print(
            "cell %i, %s: mean D %f, var D %f, %i failed"
            % (cell_index, desc, cell.empirical_mean_d, cell.empirical_var_d, cell.n_failed),
            file=log.v4,
        )
        if cell.flagged:
            log.print_warning("cell %s: %i of %i fits failed" % (desc, cell.n_failed, cell.replicates))
        res.append(cell)
    print("Simulated %i cells in %s." % (len(cells), hms(time.time() - start_time)), file=log.v4)
    return res


def run_table1(config: ExperimentConfig, num_workers: int = 1) -> ExperimentSummary:
    """
    Mean and variance of D, with the MLE plug-in variance, for each true model of the grid and each n.
    """
    return ExperimentSummary(
        cells=run_cells(config, config.cells(), num_workers=num_workers),
        master_seed=config.master_seed,
        label=config.label,
    )


def run_table1_rows(configs: Sequence[ExperimentConfig], num_workers: int = 1) -> ExperimentSummary:
    """
    Several configs (e.g. the rows of the full table) into one summary.
    """
    cells = []
    for config in configs:
        print("Run %s." % (config.label or config.family), file=log.v3)
        cells.extend(run_table1(config, num_workers=num_workers).cells)
    return ExperimentSummary(cells=cells, master_seed=configs[0].master_seed if configs else 0)


def run_rejection_experiment(
    config: ExperimentConfig,
    true_spec: Optional[DistributionSpec] = None,
    fit_family: Optional[str] = None,
    num_workers: int = 1,
) -> ExperimentSummary:
    """
    Samples from the true model, fits ``fit_family``, and counts D outside the equal-tail chi-square(n-1) cutoffs.

    :param config:
    :param true_spec: default is from the config
    :param fit_family: default is config.family
    :param num_workers:
    """
    if true_spec is not None:
        config = dataclasses.replace(
            config, true_distribution=true_spec.to_dict(), parameter_grid=(), grid_param=None, fixed_params={}
        )
    if fit_family is not None and fit_family != config.family:
        if config.true_distribution is None:
            raise ConfigError("fitting another family needs a single true distribution", key_path="true_distribution")
        config = dataclasses.replace(config, family=fit_family, parameter_grid=(), grid_param=None, fixed_params={})
    return ExperimentSummary(
        cells=run_cells(config, config.cells(), num_workers=num_workers),
        master_seed=config.master_seed,
        label=config.label,
    )

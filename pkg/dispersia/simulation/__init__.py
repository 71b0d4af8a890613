"""
Deterministic Monte Carlo experiments on the variance ratio statistic D.
"""

from .basic import (
    ExperimentConfig,
    ExperimentCell,
    ExperimentSummary,
    McStandardErrors,
    mc_standard_errors,
    derive_stream_seed,
    build_gamma_mixture,
    config_to_dict,
)
from .runner import run_table1, run_table1_rows, run_rejection_experiment, simulate_d
from .presets import TABLE1_ROWS, table1_configs, rejection_preset, RejectionScenarios
from .tables import table1_table, rejection_table, histogram_table

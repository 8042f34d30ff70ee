"""Experiment configuration, trial runner, evaluation and verify suites."""

from .config import ExperimentConfig
from .evaluate import grid_lookup, heldout_error, training_error
from .experiment import (
    CSV_COLUMNS,
    TrialResult,
    generate_data,
    read_results,
    run_experiment,
    run_trial,
)
from .verify import SUITES, chisquare_pvalue, run_suites

__all__ = [
    "CSV_COLUMNS",
    "ExperimentConfig",
    "SUITES",
    "TrialResult",
    "chisquare_pvalue",
    "generate_data",
    "grid_lookup",
    "heldout_error",
    "read_results",
    "run_experiment",
    "run_suites",
    "run_trial",
    "training_error",
]

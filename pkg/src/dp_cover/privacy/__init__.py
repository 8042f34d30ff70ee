"""Differential-privacy primitives: noise, selection, budgets, random sources."""

from .budget import (
    BudgetRule,
    PrivacyBudget,
    iteration_count,
    noise_scale,
    set_cover_step_epsilon,
)
from .mechanisms import (
    QualityTable,
    exact_selection_pmf,
    exp_mech_finite,
    floored_laplace,
    laplace_tail_bound,
    log_selection_pmf,
    normalize_log_weights,
    sample_laplace,
    sample_log_categorical,
)
from .rng import make_rng, split_rng

__all__ = [
    "BudgetRule",
    "PrivacyBudget",
    "QualityTable",
    "exact_selection_pmf",
    "exp_mech_finite",
    "floored_laplace",
    "iteration_count",
    "laplace_tail_bound",
    "log_selection_pmf",
    "make_rng",
    "noise_scale",
    "normalize_log_weights",
    "sample_laplace",
    "sample_log_categorical",
    "set_cover_step_epsilon",
    "split_rng",
]

"""Exact per-step privacy ratios of literal selection on neighbouring samples.

The neighbour S' = S ∪ {(x*, σ*)} is run under the coupling of the privacy
argument: when x* is still present and carries the covered label, its noise is
shifted by −1 so both runs draw the same threshold; otherwise the noise is
shared. Each step compares the two exact selection distributions, then both runs
follow the most likely literal on S.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np

from ..concepts.base import LabeledSample, SampleKind
from ..errors import OracleError
from ..privacy.mechanisms import log_selection_pmf
from ..selectors.literal import literal_candidates, literal_quality_table
from ..selectors.quality import GeometricQuality, threshold_value
from ..setcover import LearnerConfig

logger = logging.getLogger(__name__)

RATIO_TOLERANCE = 1e-9


@dataclass(frozen=True)
class NeighborRatio:
    """Largest pmf ratio seen across the checked states and the bound exp(ε̂)."""

    max_ratio: float
    bound: float
    states_checked: int

    @property
    def passed(self) -> bool:
        return self.max_ratio <= self.bound * (1.0 + RATIO_TOLERANCE)

    def to_dict(self) -> dict[str, float | int | bool]:
        return {
            "max_ratio": self.max_ratio,
            "bound": self.bound,
            "states_checked": self.states_checked,
            "passed": self.passed,
        }


def neighbor_ratio_check(
    sample: LabeledSample,
    extra_point: Sequence[int],
    extra_label: int,
    cfg: LearnerConfig,
    noise: Sequence[int],
) -> NeighborRatio:
    """Max over steps and literals of the two-sided ratio of selection probabilities.

    Args:
        sample: Boolean sample S
        extra_point: The example x* added in the neighbour
        extra_label: Its label σ*
        cfg: A ``LearnerConfig`` supplying k, α, β, mode and the budget
        noise: Integer threshold noise for each step (run for len(noise) steps)

    Returns:
        The ratio summary; ``passed`` when every ratio is within exp(ε̂)
    """
    if sample.kind is not SampleKind.BOOL:
        raise OracleError("the ratio oracle runs on finite (literal) instances only")
    if extra_label not in (0, 1):
        raise OracleError(f"label must be 0 or 1, got {extra_label}")

    mode = cfg.mode
    step_epsilon = cfg.budget.step_epsilon
    params = (cfg.k, cfg.alpha, cfg.beta, cfg.budget.epsilon)
    literals = literal_candidates(sample.d, mode)
    current = sample
    neighbour = sample.with_example(extra_point, extra_label)
    extra_index = len(sample)
    extra_present = True
    worst = 0.0

    for w in noise:
        shift = -1 if extra_present and extra_label == mode.covered_value else 0
        b = threshold_value(current.count(mode.covered_value), int(w), *params)
        b_prime = threshold_value(neighbour.count(mode.covered_value), int(w) + shift, *params)

        table = literal_quality_table(GeometricQuality(mode, b, cfg.k, current), literals)
        table_prime = literal_quality_table(
            GeometricQuality(mode, b_prime, cfg.k, neighbour), literals
        )
        log_p = log_selection_pmf(table, step_epsilon)
        log_q = log_selection_pmf(table_prime, step_epsilon)
        worst = max(worst, float(np.max(np.abs(log_p - log_q))))

        chosen = literals[int(np.argmax(log_p))]
        keep = chosen.evaluate_points(current.points) != mode.covered_value
        current = current.subset(np.flatnonzero(keep))
        keep_prime = chosen.evaluate_points(neighbour.points) != mode.covered_value
        if extra_present and not keep_prime[extra_index]:
            extra_present = False
        kept = np.flatnonzero(keep_prime)
        if extra_present:
            extra_index = int(np.searchsorted(kept, extra_index))
        neighbour = neighbour.subset(kept)

    result = NeighborRatio(
        max_ratio=math.exp(worst), bound=math.exp(step_epsilon), states_checked=len(noise)
    )
    logger.debug("neighbour ratio %.6f against bound %.6f", result.max_ratio, result.bound)
    return result

"""The set-cover quality function and its noisy threshold."""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Any

import numpy as np

from ..concepts.base import LabeledSample
from ..concepts.expr import HypothesisExpr, evaluate_sample
from ..privacy.budget import noise_scale
from ..privacy.mechanisms import floored_laplace


class Mode(str, Enum):
    """Which class the engine covers.

    AND-mode covers negatives with predicates that label them 0 and must leave
    positives alone; OR-mode covers positives with predicates that label them 1
    and must leave negatives alone.
    """

    AND = "and"
    OR = "or"

    @property
    def covered_value(self) -> int:
        """Predicate value that deletes an example (and the label being covered)."""
        return 0 if self is Mode.AND else 1


@dataclass(frozen=True)
class GeometricQuality:
    """Scoring context of one iteration.

    Attributes:
        mode: AND or OR
        b_j: Noisy threshold of this iteration
        k: Clause budget
        sample: Examples not yet deleted
    """

    mode: Mode
    b_j: float
    k: int
    sample: LabeledSample

    def __post_init__(self) -> None:
        object.__setattr__(self, "mode", Mode(self.mode))

    @property
    def covered_value(self) -> int:
        return self.mode.covered_value

    @property
    def target_label(self) -> int:
        return self.mode.covered_value

    def target_mask(self) -> np.ndarray:
        return self.sample.labels == self.target_label

    def score_counts(
        self, covered_target: np.ndarray | int, covered_other: np.ndarray | int
    ) -> np.ndarray | float:
        """min(covered_target − b_j/k, −covered_other), elementwise."""
        first = np.asarray(covered_target, dtype=np.float64) - self.b_j / self.k
        second = -np.asarray(covered_other, dtype=np.float64)
        result = np.minimum(first, second)
        return float(result) if result.ndim == 0 else result

    def to_dict(self) -> dict[str, Any]:
        return {
            "mode": self.mode.value,
            "b_j": self.b_j,
            "k": self.k,
            "remaining": len(self.sample),
        }


def quality_score(h: HypothesisExpr, gq: GeometricQuality) -> float:
    """Score a predicate by evaluating it on every remaining example.

    Args:
        h: Predicate (or any expression) valid for the sample's kind
        gq: Scoring context

    Returns:
        The exact count-based score
    """
    if len(gq.sample) == 0:
        return gq.score_counts(0, 0)
    covered = evaluate_sample(h, gq.sample) == gq.covered_value
    target = gq.target_mask()
    return gq.score_counts(
        int(np.count_nonzero(covered & target)),
        int(np.count_nonzero(covered & ~target)),
    )


def threshold_offset(k: int, alpha: float, beta: float, epsilon: float) -> float:
    """(2k/ε)·ln(2/α)·ln((2k/β)·ln(2/α))."""
    log_term = math.log(2.0 / alpha)
    return 2.0 * k / epsilon * log_term * math.log(2.0 * k / beta * log_term)


def threshold_value(
    target_count: int, noise: int, k: int, alpha: float, beta: float, epsilon: float
) -> float:
    return target_count + noise - threshold_offset(k, alpha, beta, epsilon)


@dataclass(frozen=True)
class NoisyThreshold:
    value: float
    noise: int


def noisy_threshold(
    sample: LabeledSample,
    k: int,
    alpha: float,
    beta: float,
    epsilon: float,
    rng: np.random.Generator,
    mode: Mode = Mode.AND,
) -> NoisyThreshold:
    """Draw b_j = |S^c| + ⌊Lap((2k/ε)ln(2/α))⌋ − offset for the covered class c.

    Args:
        sample: Remaining examples
        k: Clause budget
        alpha: Accuracy parameter
        beta: Confidence parameter
        epsilon: Overall privacy parameter
        rng: Noise source
        mode: AND counts negatives, OR counts positives

    Returns:
        The threshold and the integer noise that produced it
    """
    mode = Mode(mode)
    noise = int(floored_laplace(noise_scale(k, alpha, epsilon), rng))
    value = threshold_value(sample.count(mode.covered_value), noise, k, alpha, beta, epsilon)
    return NoisyThreshold(value=value, noise=noise)

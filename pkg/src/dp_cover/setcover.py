"""The private greedy set-cover learner.

Each iteration draws a noisy threshold on the size of the class being covered,
asks a selector for one predicate, and deletes every remaining example that
predicate labels with the covered value. After a fixed number of iterations the
chosen predicates are combined with AND (covering negatives) or OR (covering
positives).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from .concepts.base import LabeledSample
from .concepts.expr import (
    HypothesisExpr,
    Predicate,
    conjunction,
    disjunction,
    evaluate_sample,
)
from .errors import KindMismatchError, ParameterError
from .privacy.budget import PrivacyBudget, iteration_count
from .privacy.rng import split_rng
from .selectors import DEFAULT_TRIPLE_CAP, GeometricQuality, Mode, Selector, noisy_threshold
from .selectors.quality import threshold_offset

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class LearnerConfig:
    """Parameters of one set-cover run.

    Attributes:
        k: Clause budget
        alpha: Accuracy parameter
        beta: Confidence parameter
        budget: Privacy budget (overall ε, δ and the per-step ε̂)
        mode: AND or OR
        selection: Name of the selector
        triple_cap: Enumeration cap handed to triangle selection
    """

    k: int
    alpha: float
    beta: float
    budget: PrivacyBudget
    mode: Mode = Mode.AND
    selection: str = "literal"
    triple_cap: int = DEFAULT_TRIPLE_CAP

    def __post_init__(self) -> None:
        if self.k < 1:
            raise ParameterError(f"k must be at least 1, got {self.k}")
        if not 0 < self.alpha < 1:
            raise ParameterError(f"alpha must lie in (0, 1), got {self.alpha}")
        if not 0 < self.beta < 1:
            raise ParameterError(f"beta must lie in (0, 1), got {self.beta}")
        object.__setattr__(self, "mode", Mode(self.mode))

    @property
    def iteration_count(self) -> int:
        return iteration_count(self.k, self.alpha)

    def to_dict(self) -> dict[str, Any]:
        return {
            "k": self.k,
            "alpha": self.alpha,
            "beta": self.beta,
            "budget": self.budget.to_dict(),
            "mode": self.mode.value,
            "selection": self.selection,
            "iterations": self.iteration_count,
        }


@dataclass(frozen=True)
class IterationRecord:
    """What happened in one iteration."""

    iteration: int
    threshold: float
    noise: int
    predicate: Predicate
    deleted: int
    remaining_negatives: int
    remaining_positives: int

    def to_dict(self) -> dict[str, Any]:
        return {
            "iteration": self.iteration,
            "b_j": self.threshold,
            "w_j": self.noise,
            "predicate": self.predicate.to_dict(),
            "deleted": self.deleted,
            "remaining_negatives": self.remaining_negatives,
            "remaining_positives": self.remaining_positives,
        }


@dataclass
class RunTrace:
    """Per-iteration records of a run plus its final hypothesis."""

    initial_size: int
    records: list[IterationRecord] = field(default_factory=list)
    hypothesis: HypothesisExpr | None = None

    @property
    def total_deleted(self) -> int:
        return sum(record.deleted for record in self.records)

    @property
    def final_size(self) -> int:
        return self.initial_size - self.total_deleted

    def to_dict(self) -> dict[str, Any]:
        return {
            "initial_size": self.initial_size,
            "final_size": self.final_size,
            "iterations": [record.to_dict() for record in self.records],
            "hypothesis": self.hypothesis.to_dict() if self.hypothesis is not None else None,
        }


def run_setcover(
    sample: LabeledSample,
    cfg: LearnerConfig,
    selector: Selector,
    rng: np.random.Generator,
) -> tuple[HypothesisExpr, RunTrace]:
    """Run the private set-cover loop for exactly ``cfg.iteration_count`` iterations.

    Args:
        sample: Training sample
        cfg: Run parameters
        selector: Predicate selector matching the sample kind
        rng: Random source; one child stream per iteration, each split into a
            threshold stream and a selection stream

    Returns:
        The final hypothesis and the run trace
    """
    if selector.kind is not sample.kind:
        raise KindMismatchError(
            f"{selector.name} selection needs {selector.kind.value} examples, "
            f"got {sample.kind.value}"
        )

    mode = cfg.mode
    budget = cfg.budget
    trace = RunTrace(initial_size=len(sample))
    chosen: list[Predicate] = []
    remaining = sample

    for j, stream in enumerate(split_rng(rng, cfg.iteration_count)):
        noise_rng, select_rng = split_rng(stream, 2)
        threshold = noisy_threshold(
            remaining, cfg.k, cfg.alpha, cfg.beta, budget.epsilon, noise_rng, mode
        )
        gq = GeometricQuality(mode, threshold.value, cfg.k, remaining)
        predicate = selector.select(gq, budget.step_epsilon, select_rng)
        chosen.append(predicate)

        covered = evaluate_sample(predicate, remaining) == mode.covered_value
        remaining = remaining.subset(np.flatnonzero(~covered))
        record = IterationRecord(
            iteration=j,
            threshold=threshold.value,
            noise=threshold.noise,
            predicate=predicate,
            deleted=int(np.count_nonzero(covered)),
            remaining_negatives=remaining.count(0),
            remaining_positives=remaining.count(1),
        )
        trace.records.append(record)
        logger.debug(
            "iteration %d: b_j=%.3f w_j=%d deleted=%d left=(%d neg, %d pos)",
            j,
            record.threshold,
            record.noise,
            record.deleted,
            record.remaining_negatives,
            record.remaining_positives,
        )

    hypothesis = conjunction(chosen) if mode is Mode.AND else disjunction(chosen)
    trace.hypothesis = hypothesis
    logger.info(
        "%s run: %d iterations, %d of %d examples deleted",
        selector.name,
        len(chosen),
        trace.total_deleted,
        trace.initial_size,
    )
    return hypothesis, trace


def empirical_error_bound(cfg: LearnerConfig, n: int, lam: float = 0.0) -> float:
    """Mistakes h_fin may make on its own training sample of size ``n``.

    max(αn/2, (8k/ε)·ln(2/α)·ln((2k/β)·ln(2/α))) + 2λ·T, where λ is the selector's
    per-iteration quality shortfall and T the iteration count.
    """
    if n < 0:
        raise ParameterError(f"sample size must be non-negative, got {n}")
    if lam < 0:
        raise ParameterError(f"lambda must be non-negative, got {lam}")
    noise_term = 4.0 * threshold_offset(cfg.k, cfg.alpha, cfg.beta, cfg.budget.epsilon)
    return max(cfg.alpha * n / 2.0, noise_term) + 2.0 * lam * cfg.iteration_count


__all__ = [
    "IterationRecord",
    "LearnerConfig",
    "RunTrace",
    "empirical_error_bound",
    "iteration_count",
    "run_setcover",
]

"""The classical noiseless greedy set-cover baseline."""

from __future__ import annotations

import logging
import math

import numpy as np

from ..concepts.base import LabeledSample, SampleKind
from ..concepts.expr import HypothesisExpr, Predicate, conjunction, disjunction, eval_expr
from ..errors import OracleError
from ..geometry.arrangement import build_arrangement
from ..selectors.literal import literal_candidates
from ..selectors.quality import Mode
from .exhaustive import face_candidates

logger = logging.getLogger(__name__)


def greedy_candidates(sample: LabeledSample, mode: Mode) -> list[Predicate]:
    if sample.kind is SampleKind.BOOL:
        return list(literal_candidates(sample.d, mode))
    return list(face_candidates(build_arrangement(sample)))


def greedy_setcover_nonprivate(
    sample: LabeledSample,
    k: int,
    mode: Mode = Mode.AND,
) -> HypothesisExpr:
    """Greedy cover of one class by predicates that never touch the other class.

    AND-mode repeatedly picks the predicate labelling 0 the most uncovered
    negatives while labelling every positive 1; OR-mode mirrors this for
    positives. Stops once the class is covered or after k·⌈log₂ n⌉ picks.

    Raises:
        OracleError: If some uncovered example cannot be covered safely
    """
    mode = Mode(mode)
    candidates = greedy_candidates(sample, mode)
    covered_value = mode.covered_value
    labels = sample.labels
    target = labels == covered_value

    safe: list[Predicate] = []
    cover_rows: list[np.ndarray] = []
    for h in candidates:
        values = [eval_expr(h, point, sample.kind) for point in sample.points.tolist()]
        covered = np.array(values, dtype=np.int64) == covered_value
        if np.any(covered & ~target):
            continue
        safe.append(h)
        cover_rows.append(covered & target)

    max_picks = k * max(1, math.ceil(math.log2(max(len(sample), 2))))
    uncovered = target.copy()
    chosen: list[Predicate] = []
    while uncovered.any() and len(chosen) < max_picks:
        gains = [int(np.count_nonzero(row & uncovered)) for row in cover_rows]
        if not gains or max(gains) == 0:
            raise OracleError(
                f"{int(uncovered.sum())} examples cannot be covered "
                "without touching the other class"
            )
        best = int(np.argmax(gains))
        chosen.append(safe[best])
        uncovered &= ~cover_rows[best]

    logger.debug("greedy chose %d predicates, %d left uncovered", len(chosen), uncovered.sum())
    return conjunction(chosen) if mode is Mode.AND else disjunction(chosen)

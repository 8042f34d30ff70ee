"""Exponential-mechanism selection over the 2d literals."""

from __future__ import annotations

from collections.abc import Sequence

import numpy as np

from ..concepts.base import SampleKind
from ..concepts.expr import Literal
from ..errors import KindMismatchError, ParameterError
from ..privacy.mechanisms import QualityTable, exp_mech_finite
from .quality import GeometricQuality, Mode


def literal_candidates(d: int, mode: Mode = Mode.AND) -> tuple[Literal, ...]:
    """All 2d literals in a fixed order.

    AND-mode lists v0, ¬v0, v1, ¬v1, ...; OR-mode lists the complement at every
    position, so an OR run on S and an AND run on the flipped sample see the same
    score vector.
    """
    if d < 1:
        raise ParameterError(f"need at least one variable, got {d}")
    negate_first = Mode(mode) is Mode.OR
    result: list[Literal] = []
    for index in range(d):
        result.append(Literal(index, negate_first))
        result.append(Literal(index, not negate_first))
    return tuple(result)


def literal_quality_table(gq: GeometricQuality, literals: Sequence[Literal]) -> QualityTable:
    """Scores of every literal on the remaining sample."""
    if not literals:
        raise ParameterError("no literals to select from")
    if gq.sample.kind is not SampleKind.BOOL:
        raise KindMismatchError("literal selection needs a Boolean sample")

    sample = gq.sample
    target = gq.target_mask()
    covered_target = np.zeros(len(literals), dtype=np.int64)
    covered_other = np.zeros(len(literals), dtype=np.int64)
    if len(sample):
        for i, literal in enumerate(literals):
            covered = literal.evaluate_points(sample.points) == gq.covered_value
            covered_target[i] = np.count_nonzero(covered & target)
            covered_other[i] = np.count_nonzero(covered & ~target)
    return QualityTable(tuple(literals), gq.score_counts(covered_target, covered_other))


def select_literal(
    gq: GeometricQuality,
    literals: Sequence[Literal],
    step_epsilon: float,
    rng: np.random.Generator,
) -> Literal:
    """Pick a literal with probability proportional to exp(ε̂·q/2)."""
    table = literal_quality_table(gq, literals)
    return exp_mech_finite(table, step_epsilon, rng)  # type: ignore[return-value]


class LiteralSelector:
    """Selector over all literals of a d-variable Boolean domain."""

    name = "literal"
    kind = SampleKind.BOOL

    def __init__(self, d: int, mode: Mode = Mode.AND):
        self.d = d
        self.mode = Mode(mode)
        self.candidates = literal_candidates(d, self.mode)

    def select(
        self, gq: GeometricQuality, step_epsilon: float, rng: np.random.Generator
    ) -> Literal:
        return select_literal(gq, self.candidates, step_epsilon, rng)

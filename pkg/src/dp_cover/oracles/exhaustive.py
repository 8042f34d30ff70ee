"""Naive scoring and grid enumeration, written without the vectorised helpers."""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass

from ..concepts.base import GridSpec, LabeledSample
from ..concepts.expr import HypothesisExpr, eval_expr
from ..concepts.halfplane import GeneralHalfplane, Halfplane
from ..errors import OracleError
from ..geometry.arrangement import Arrangement
from ..privacy.mechanisms import QualityTable
from ..selectors.quality import GeometricQuality

MAX_CANDIDATES = 10**4
MAX_GRID_D = 64


def pointwise_cover_counts(
    sample: LabeledSample, h: HypothesisExpr, covered_value: int
) -> tuple[int, int]:
    """(covered examples with label ``covered_value``, covered examples with the other label)."""
    same = other = 0
    for point, label in zip(sample.points.tolist(), sample.labels.tolist()):
        if eval_expr(h, point, sample.kind) != covered_value:
            continue
        if label == covered_value:
            same += 1
        else:
            other += 1
    return same, other


def exhaustive_hypothesis_scores(
    gq: GeometricQuality,
    candidates: Sequence[HypothesisExpr],
    cap: int = MAX_CANDIDATES,
) -> QualityTable:
    """Score every candidate example by example.

    Raises:
        OracleError: If there are more than ``cap`` candidates
    """
    if len(candidates) > cap:
        raise OracleError(f"{len(candidates)} candidates exceed the oracle cap of {cap}")
    scores = []
    for h in candidates:
        same, other = pointwise_cover_counts(gq.sample, h, gq.covered_value)
        scores.append(min(same - gq.b_j / gq.k, -other))
    return QualityTable(tuple(candidates), scores)


def face_candidates(arr: Arrangement) -> list[Halfplane]:
    """The halfplane at each face's representative, both orientations, in candidate order."""
    result = []
    for face in arr.faces:
        a, b = face.representative
        result.append(Halfplane.from_decoded(a, b, 1, arr.grid.d))
        result.append(Halfplane.from_decoded(a, b, -1, arr.grid.d))
    return result


@dataclass(frozen=True)
class GridEquivalence:
    """Whether two halfplanes agree on every grid point; a disagreeing point if not."""

    equal: bool
    witness: tuple[int, int] | None = None

    def __bool__(self) -> bool:
        return self.equal


def grid_equivalence_check(
    f: GeneralHalfplane | Halfplane,
    f_hat: Halfplane | GeneralHalfplane,
    grid: GridSpec,
) -> GridEquivalence:
    """Compare two halfplanes on all (d+1)² grid points.

    Raises:
        OracleError: If d > 64
    """
    if grid.d > MAX_GRID_D:
        raise OracleError(f"grid enumeration limited to d ≤ {MAX_GRID_D}, got {grid.d}")
    for x in range(grid.d + 1):
        for y in range(grid.d + 1):
            if f.evaluate(x, y) != f_hat.evaluate(x, y):
                return GridEquivalence(False, (x, y))
    return GridEquivalence(True)

"""Boolean literals, triangles and AND/OR hypothesis trees."""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Any, Union

import numpy as np

from ..errors import KindMismatchError, ParameterError
from .base import LabeledSample, SampleKind
from .halfplane import GeneralHalfplane, Halfplane


@dataclass(frozen=True)
class Literal:
    """The literal v_i, or its negation ¬v_i."""

    variable_index: int
    negated: bool = False

    def __post_init__(self) -> None:
        if self.variable_index < 0:
            raise ParameterError(f"variable index must be non-negative, got {self.variable_index}")

    def complement(self) -> Literal:
        return Literal(self.variable_index, not self.negated)

    def evaluate(self, bits: Sequence[int]) -> int:
        if self.variable_index >= len(bits):
            raise ParameterError(
                f"literal on variable {self.variable_index} but example has {len(bits)} bits"
            )
        value = int(bits[self.variable_index])
        return 1 - value if self.negated else value

    def evaluate_points(self, vectors: np.ndarray) -> np.ndarray:
        vectors = np.asarray(vectors)
        if vectors.shape[1] <= self.variable_index:
            raise ParameterError(
                f"literal on variable {self.variable_index} but examples have "
                f"{vectors.shape[1]} bits"
            )
        column = vectors[:, self.variable_index].astype(np.uint8)
        return 1 - column if self.negated else column

    def __str__(self) -> str:
        return f"{'¬' if self.negated else ''}v{self.variable_index}"

    def to_dict(self) -> dict[str, Any]:
        return {"type": "literal", "index": self.variable_index, "negated": self.negated}


@dataclass(frozen=True)
class Triangle:
    """Conjunction of exactly three halfplanes."""

    halfplanes: tuple[Halfplane, Halfplane, Halfplane]

    def __post_init__(self) -> None:
        halfplanes = tuple(self.halfplanes)
        if len(halfplanes) != 3:
            raise ParameterError(f"a triangle needs 3 halfplanes, got {len(halfplanes)}")
        object.__setattr__(self, "halfplanes", halfplanes)

    def evaluate(self, x: int, y: int) -> int:
        return int(all(h.evaluate(x, y) for h in self.halfplanes))

    def evaluate_points(self, points: np.ndarray) -> np.ndarray:
        result = np.ones(len(points), dtype=np.uint8)
        for h in self.halfplanes:
            result &= h.evaluate_points(points)
        return result

    def to_dict(self) -> dict[str, Any]:
        return {"type": "triangle", "halfplanes": [h.to_dict() for h in self.halfplanes]}


class Connective(str, Enum):
    AND = "and"
    OR = "or"


@dataclass(frozen=True)
class ExprNode:
    """AND or OR over child expressions. AND() is 1 and OR() is 0."""

    op: Connective
    children: tuple[HypothesisExpr, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "op", Connective(self.op))
        object.__setattr__(self, "children", tuple(self.children))

    def to_dict(self) -> dict[str, Any]:
        return {"type": self.op.value, "children": [c.to_dict() for c in self.children]}


Predicate = Union[Literal, Halfplane, GeneralHalfplane, Triangle]
HypothesisExpr = Union[ExprNode, Predicate]


def conjunction(children: Sequence[HypothesisExpr]) -> ExprNode:
    return ExprNode(Connective.AND, tuple(children))


def disjunction(children: Sequence[HypothesisExpr]) -> ExprNode:
    return ExprNode(Connective.OR, tuple(children))


def leaf_kind(leaf: Predicate) -> SampleKind:
    """Example domain a predicate is defined on."""
    if isinstance(leaf, Literal):
        return SampleKind.BOOL
    if isinstance(leaf, (Halfplane, GeneralHalfplane, Triangle)):
        return SampleKind.GRID
    raise ParameterError(f"not a predicate: {leaf!r}")


def _check_kind(leaf: Predicate, kind: SampleKind) -> None:
    expected = leaf_kind(leaf)
    if expected is not SampleKind(kind):
        raise KindMismatchError(
            f"{type(leaf).__name__} applies to {expected.value} examples, not {kind.value}"
        )


def eval_expr(expr: HypothesisExpr, example: Sequence[int], kind: SampleKind) -> int:
    """Evaluate a hypothesis on one example.

    Args:
        expr: Hypothesis tree
        example: A grid point (x, y) or a Boolean vector
        kind: Domain of ``example``

    Returns:
        0 or 1

    Raises:
        KindMismatchError: If a leaf belongs to the other domain
    """
    kind = SampleKind(kind)
    if isinstance(expr, ExprNode):
        values = (eval_expr(child, example, kind) for child in expr.children)
        if expr.op is Connective.AND:
            return int(all(values))
        return int(any(values))

    _check_kind(expr, kind)
    if isinstance(expr, Literal):
        return expr.evaluate(example)
    x, y = example
    return expr.evaluate(int(x), int(y))


def evaluate_sample(expr: HypothesisExpr, sample: LabeledSample) -> np.ndarray:
    """Vectorised evaluation over every example of ``sample``; returns a uint8 array."""
    if isinstance(expr, ExprNode):
        if expr.op is Connective.AND:
            result = np.ones(len(sample), dtype=np.uint8)
            for child in expr.children:
                result &= evaluate_sample(child, sample)
        else:
            result = np.zeros(len(sample), dtype=np.uint8)
            for child in expr.children:
                result |= evaluate_sample(child, sample)
        return result

    _check_kind(expr, sample.kind)
    if len(sample) == 0:
        return np.zeros(0, dtype=np.uint8)
    return expr.evaluate_points(sample.points).astype(np.uint8)


def empirical_error(expr: HypothesisExpr, sample: LabeledSample) -> Fraction:
    """Exact fraction of examples that ``expr`` misclassifies."""
    if len(sample) == 0:
        raise ParameterError("empirical error of an empty sample is undefined")
    predictions = evaluate_sample(expr, sample)
    mistakes = int(np.count_nonzero(predictions != sample.labels))
    return Fraction(mistakes, len(sample))


def leaves(expr: HypothesisExpr) -> list[Predicate]:
    """All predicates of a tree, left to right."""
    if isinstance(expr, ExprNode):
        result: list[Predicate] = []
        for child in expr.children:
            result.extend(leaves(child))
        return result
    return [expr]

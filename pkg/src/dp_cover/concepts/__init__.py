"""Example domains, samples, predicates and hypothesis trees."""

from ..errors import ParameterError
from .base import GridSpec, LabeledSample, SampleKind
from .expr import (
    Connective,
    ExprNode,
    HypothesisExpr,
    Literal,
    Predicate,
    Triangle,
    conjunction,
    disjunction,
    empirical_error,
    eval_expr,
    evaluate_sample,
    leaf_kind,
    leaves,
)
from .halfplane import GeneralHalfplane, Halfplane, canonicalize_halfplane
from .io import (
    hypothesis_from_dict,
    hypothesis_to_dict,
    read_hypothesis_json,
    read_sample_jsonl,
    write_hypothesis_json,
    write_sample_jsonl,
)


def eval_halfplane(h: Halfplane, point: tuple[int, int]) -> int:
    """1 iff z·y ≥ z·(a·x + b) for the decoded (a, b, z); exact.

    Raises:
        ParameterError: If the point lies outside the grid {0,…,d}²
    """
    x, y = int(point[0]), int(point[1])
    if not GridSpec(h.d).contains(x, y):
        raise ParameterError(f"point ({x}, {y}) lies outside the grid [0, {h.d}]²")
    return h.evaluate(x, y)


__all__ = [
    "Connective",
    "ExprNode",
    "GeneralHalfplane",
    "GridSpec",
    "Halfplane",
    "HypothesisExpr",
    "LabeledSample",
    "Literal",
    "Predicate",
    "SampleKind",
    "Triangle",
    "canonicalize_halfplane",
    "conjunction",
    "disjunction",
    "empirical_error",
    "eval_expr",
    "eval_halfplane",
    "evaluate_sample",
    "hypothesis_from_dict",
    "hypothesis_to_dict",
    "leaf_kind",
    "leaves",
    "read_hypothesis_json",
    "read_sample_jsonl",
    "write_hypothesis_json",
    "write_sample_jsonl",
]

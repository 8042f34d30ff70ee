"""Training and held-out error of a learned hypothesis."""

from __future__ import annotations

import numpy as np

from ..concepts.base import GridSpec, LabeledSample, SampleKind
from ..concepts.expr import HypothesisExpr, empirical_error, evaluate_sample
from ..datagen.distributions import Distribution, sample_distribution
from ..datagen.targets import ConjunctionTarget, PolygonTarget, TargetConcept


def training_error(hypothesis: HypothesisExpr, sample: LabeledSample) -> float:
    return float(empirical_error(hypothesis, sample))


def grid_lookup(expr: HypothesisExpr | TargetConcept, grid: GridSpec) -> np.ndarray:
    """Labels of every grid point, indexed by ``grid.point_index``."""
    points = grid.points()
    if isinstance(expr, (ConjunctionTarget, PolygonTarget)):
        return expr.evaluate_points(points)
    zeros = np.zeros(len(points), dtype=np.int64)
    unlabeled = LabeledSample(points, zeros, SampleKind.GRID, grid.d)
    return evaluate_sample(expr, unlabeled)


def heldout_error(
    hypothesis: HypothesisExpr,
    target: TargetConcept,
    distribution: Distribution | str,
    n: int,
    rng: np.random.Generator,
    sigma: float = 0.05,
) -> float:
    """Disagreement rate of hypothesis and target on n fresh points.

    Grid hypotheses are tabulated once over the (d+1)² grid, so each fresh point
    costs a table lookup.
    """
    points = sample_distribution(distribution, n, target.d, rng, target=target, sigma=sigma)
    if target.kind is SampleKind.BOOL:
        unlabeled = LabeledSample(points, np.zeros(n, dtype=np.int64), SampleKind.BOOL, target.d)
        predicted = evaluate_sample(hypothesis, unlabeled)
        truth = target.evaluate_points(points)
    else:
        grid = GridSpec(target.d)
        index = grid.point_index(points)
        predicted = grid_lookup(hypothesis, grid)[index]
        truth = grid_lookup(target, grid)[index]
    return float(np.count_nonzero(predicted != truth)) / n

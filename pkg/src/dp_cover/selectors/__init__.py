"""Private selection procedures plugged into the set-cover loop."""

from __future__ import annotations

from typing import Protocol

import numpy as np

from ..concepts.base import SampleKind
from ..concepts.expr import Predicate
from .halfplane import (
    HalfplaneSelector,
    candidate_log_weights,
    halfplane_selection_pmf,
    halfplane_utility_slack,
    select_halfplane,
)
from .literal import LiteralSelector, literal_candidates, literal_quality_table, select_literal
from .quality import (
    GeometricQuality,
    Mode,
    NoisyThreshold,
    noisy_threshold,
    quality_score,
    threshold_offset,
    threshold_value,
)
from .triangle import (
    DEFAULT_TRIPLE_CAP,
    TriangleSelector,
    draw_candidate_triple,
    select_triangle,
    triangle_scores,
    triangle_selection_pmf,
)


class Selector(Protocol):
    """Anything that picks one predicate per iteration from a scoring context."""

    name: str
    kind: SampleKind

    def select(
        self, gq: GeometricQuality, step_epsilon: float, rng: np.random.Generator
    ) -> Predicate: ...


__all__ = [
    "DEFAULT_TRIPLE_CAP",
    "GeometricQuality",
    "HalfplaneSelector",
    "LiteralSelector",
    "Mode",
    "NoisyThreshold",
    "Selector",
    "TriangleSelector",
    "candidate_log_weights",
    "draw_candidate_triple",
    "halfplane_selection_pmf",
    "halfplane_utility_slack",
    "literal_candidates",
    "literal_quality_table",
    "noisy_threshold",
    "quality_score",
    "select_halfplane",
    "select_literal",
    "select_triangle",
    "threshold_offset",
    "threshold_value",
    "triangle_scores",
    "triangle_selection_pmf",
]

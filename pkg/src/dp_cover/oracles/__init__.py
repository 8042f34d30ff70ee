"""Non-private baselines and brute-force verifiers."""

from .exhaustive import (
    GridEquivalence,
    exhaustive_hypothesis_scores,
    face_candidates,
    grid_equivalence_check,
    pointwise_cover_counts,
)
from .greedy import greedy_setcover_nonprivate
from .privacy import NeighborRatio, neighbor_ratio_check
from .report import Comparison, OracleReport

__all__ = [
    "Comparison",
    "GridEquivalence",
    "NeighborRatio",
    "OracleReport",
    "exhaustive_hypothesis_scores",
    "face_candidates",
    "greedy_setcover_nonprivate",
    "grid_equivalence_check",
    "neighbor_ratio_check",
    "pointwise_cover_counts",
]

"""Private halfplane selection over the faces of the dual arrangement.

Candidates are (face, orientation) pairs, indexed 2·face for z = +1 and
2·face + 1 for z = −1. A candidate is drawn with probability proportional to
area · exp(ε·q), then a uniform point of its face gives the halfplane.
"""

from __future__ import annotations

import logging
import math

import numpy as np

from ..concepts.base import SampleKind
from ..concepts.halfplane import Halfplane
from ..errors import KindMismatchError, ParameterError
from ..geometry.arrangement import Arrangement, build_arrangement, pack_mask_words, popcount
from ..geometry.exact import fraction_log
from ..geometry.sampling import uniform_point_in_face
from ..privacy.mechanisms import normalize_log_weights, sample_log_categorical
from ..privacy.rng import split_rng
from .quality import GeometricQuality, Mode

logger = logging.getLogger(__name__)


def candidate_zero_words(arr: Arrangement) -> np.ndarray:
    """Word masks (2F × W): bit i of candidate c set iff c labels example i 0.

    Inside a face no example lies on the boundary line, so the z = −1 halfplane
    labels 0 exactly the examples the z = +1 halfplane labels 1.
    """
    below = arr.mask_words()
    zero = np.empty((2 * below.shape[0], below.shape[1]), dtype=np.uint64)
    zero[0::2] = below
    zero[1::2] = ~below & arr.all_words()
    return zero


def candidate_covered_words(arr: Arrangement, mode: Mode) -> np.ndarray:
    """Word masks (2F × W) of the examples each candidate deletes."""
    zero = candidate_zero_words(arr)
    return zero if Mode(mode) is Mode.AND else ~zero & arr.all_words()


def target_words(arr: Arrangement, gq: GeometricQuality) -> tuple[np.ndarray, np.ndarray]:
    """Word masks of the examples to cover and of the others."""
    target = pack_mask_words(gq.target_mask(), arr.word_count)
    return target, ~target & arr.all_words()


def candidate_scores(arr: Arrangement, gq: GeometricQuality) -> np.ndarray:
    covered = candidate_covered_words(arr, gq.mode)
    target, other = target_words(arr, gq)
    covered_target = popcount(covered & target)
    covered_other = popcount(covered & other)
    return np.atleast_1d(gq.score_counts(covered_target, covered_other))


def log_areas(arr: Arrangement) -> np.ndarray:
    return np.array([fraction_log(face.area) for face in arr.faces], dtype=np.float64)


def candidate_log_weights(
    arr: Arrangement, gq: GeometricQuality, epsilon_sel: float
) -> np.ndarray:
    """log(area) + ε·q for every (face, orientation) candidate."""
    if not (math.isfinite(epsilon_sel) and epsilon_sel > 0):
        raise ParameterError(f"epsilon must be a positive finite number, got {epsilon_sel}")
    return np.repeat(log_areas(arr), 2) + epsilon_sel * candidate_scores(arr, gq)


def halfplane_selection_pmf(
    arr: Arrangement, gq: GeometricQuality, epsilon_sel: float
) -> np.ndarray:
    """Exact candidate probabilities, aligned with the 2F candidate indices."""
    return normalize_log_weights(candidate_log_weights(arr, gq, epsilon_sel))


def candidate_halfplane(
    arr: Arrangement, candidate: int, rng: np.random.Generator
) -> Halfplane:
    """Draw the halfplane of a candidate: uniform point of its face, orientation by parity."""
    face = arr.faces[candidate // 2]
    a, b = uniform_point_in_face(face, rng)
    z = 1 if candidate % 2 == 0 else -1
    return Halfplane.from_decoded(a, b, z, arr.grid.d)


def prepare_arrangement(gq: GeometricQuality, arrangement: Arrangement | None) -> Arrangement:
    if gq.sample.kind is not SampleKind.GRID:
        raise KindMismatchError("geometric selection needs a grid sample")
    if arrangement is None:
        return build_arrangement(gq.sample)
    if arrangement.sample_size != len(gq.sample):
        raise ParameterError(
            f"arrangement covers {arrangement.sample_size} examples, sample has {len(gq.sample)}"
        )
    return arrangement


def select_halfplane(
    gq: GeometricQuality,
    epsilon_sel: float,
    rng: np.random.Generator,
    arrangement: Arrangement | None = None,
) -> Halfplane:
    """Sample a halfplane with density proportional to exp(ε·q).

    Args:
        gq: Scoring context; its sample defines the arrangement
        epsilon_sel: Multiplier of the score in the exponent
        rng: Random source, split into a face stream and a point stream
        arrangement: Prebuilt arrangement of ``gq.sample``

    Returns:
        The selected halfplane in (â, b) form
    """
    arr = prepare_arrangement(gq, arrangement)
    face_rng, point_rng = split_rng(rng, 2)
    log_weights = candidate_log_weights(arr, gq, epsilon_sel)
    candidate = sample_log_categorical(log_weights, face_rng)
    logger.debug(
        "halfplane candidate %d of %d (log-weight %.3f)",
        candidate,
        len(log_weights),
        log_weights[candidate],
    )
    return candidate_halfplane(arr, candidate, point_rng)


def halfplane_utility_slack(epsilon_sel: float, d: int, beta: float) -> float:
    """(8/ε)·ln(2d/β): how far below the best face quality the output may fall."""
    if not 0 < beta < 1:
        raise ParameterError(f"beta must lie in (0, 1), got {beta}")
    return 8.0 / epsilon_sel * math.log(2.0 * d / beta)


class HalfplaneSelector:
    """Halfplane selection with the score scaled by the full step budget."""

    name = "halfplane"
    kind = SampleKind.GRID

    def select(
        self, gq: GeometricQuality, step_epsilon: float, rng: np.random.Generator
    ) -> Halfplane:
        return select_halfplane(gq, step_epsilon, rng)

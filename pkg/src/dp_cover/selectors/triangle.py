"""Private selection of triangles, as ordered triples of halfplane candidates.

A triple (c1, c2, c3) has weight area1·area2·area3·exp(ε·q) where q scores the
conjunction of the three halfplanes. The conjunction labels an example 1 iff all
three do, so its counts follow from the per-candidate one-masks. Weights are
never materialised for all C³ triples at once: the first candidate is drawn from
its exact marginal (one C×C slab at a time), then the pair from its slab.
"""

from __future__ import annotations

import logging

import numpy as np
from scipy.special import logsumexp

from ..concepts.base import SampleKind
from ..concepts.expr import Triangle
from ..errors import ParameterError, ResourceCapError
from ..geometry.arrangement import Arrangement, popcount
from ..privacy.mechanisms import normalize_log_weights, sample_log_categorical
from ..privacy.rng import split_rng
from .halfplane import (
    candidate_covered_words,
    candidate_halfplane,
    log_areas,
    prepare_arrangement,
    target_words,
)
from .quality import GeometricQuality, Mode

logger = logging.getLogger(__name__)

DEFAULT_TRIPLE_CAP = 10**8


class _TripleScorer:
    """Scores and log-weights of every triple sharing a first candidate.

    Counts come from AND-ing the candidates' word masks of examples labelled 1.
    """

    def __init__(self, arr: Arrangement, gq: GeometricQuality, epsilon_sel: float):
        if not epsilon_sel > 0:
            raise ParameterError(f"epsilon must be positive, got {epsilon_sel}")
        self.gq = gq
        self.epsilon = epsilon_sel
        ones = candidate_covered_words(arr, Mode.OR)
        target, other = target_words(arr, gq)
        self.ones_target = ones & target
        self.ones_other = ones & other
        self.n_target = int(np.count_nonzero(gq.target_mask()))
        self.n_other = arr.sample_size - self.n_target
        self.log_w = np.repeat(log_areas(arr), 2)
        self.count = len(self.log_w)

    def scores(self, first: int) -> np.ndarray:
        """C×C scores of the triples (first, ·, ·)."""
        with_target = self.ones_target & self.ones_target[first]
        with_other = self.ones_other & self.ones_other[first]
        both_target = popcount(with_target[:, None, :] & self.ones_target[None, :, :])
        both_other = popcount(with_other[:, None, :] & self.ones_other[None, :, :])
        if self.gq.mode is Mode.AND:
            covered_target = self.n_target - both_target
            covered_other = self.n_other - both_other
        else:
            covered_target = both_target
            covered_other = both_other
        return np.asarray(self.gq.score_counts(covered_target, covered_other))

    def slab(self, first: int) -> np.ndarray:
        """C×C log-weights of the triples (first, ·, ·)."""
        pair = self.log_w[:, None] + self.log_w[None, :]
        return self.log_w[first] + pair + self.epsilon * self.scores(first)

    def first_marginal(self) -> np.ndarray:
        return np.array([logsumexp(self.slab(i)) for i in range(self.count)])


def triangle_scores(arr: Arrangement, gq: GeometricQuality, first: int) -> np.ndarray:
    """Mask-based scores of every triple (first, c2, c3), shape (C, C)."""
    return _TripleScorer(arr, gq, 1.0).scores(first)


def _check_cap(count: int, triple_cap: int) -> None:
    triples = count**3
    if triples > triple_cap:
        raise ResourceCapError(
            "ordered candidate triples",
            triples,
            triple_cap,
            "reduce the sample size n or raise triple_cap",
        )


def draw_candidate_triple(
    arr: Arrangement,
    gq: GeometricQuality,
    epsilon_sel: float,
    rng: np.random.Generator,
    triple_cap: int = DEFAULT_TRIPLE_CAP,
) -> tuple[int, int, int]:
    """Sample candidate indices (c1, c2, c3) from the exact triple distribution."""
    scorer = _TripleScorer(arr, gq, epsilon_sel)
    _check_cap(scorer.count, triple_cap)
    first_rng, pair_rng = split_rng(rng, 2)
    first = sample_log_categorical(scorer.first_marginal(), first_rng)
    pair = sample_log_categorical(scorer.slab(first).reshape(-1), pair_rng)
    second, third = divmod(pair, scorer.count)
    return first, second, third


def triangle_selection_pmf(
    arr: Arrangement,
    gq: GeometricQuality,
    epsilon_sel: float,
    triple_cap: int = DEFAULT_TRIPLE_CAP,
) -> np.ndarray:
    """Exact probability of every ordered triple, shape (C, C, C)."""
    scorer = _TripleScorer(arr, gq, epsilon_sel)
    _check_cap(scorer.count, triple_cap)
    log_weights = np.stack([scorer.slab(i) for i in range(scorer.count)])
    return normalize_log_weights(log_weights.reshape(-1)).reshape(log_weights.shape)


def select_triangle(
    gq: GeometricQuality,
    epsilon_sel: float,
    rng: np.random.Generator,
    arrangement: Arrangement | None = None,
    triple_cap: int = DEFAULT_TRIPLE_CAP,
) -> Triangle:
    """Sample a triangle (AND of three halfplanes) with density ∝ exp(ε·q).

    Args:
        gq: Scoring context; its sample defines the arrangement
        epsilon_sel: Multiplier of the score in the exponent
        rng: Random source
        arrangement: Prebuilt arrangement of ``gq.sample``
        triple_cap: Largest number of ordered triples to enumerate

    Returns:
        The selected triangle

    Raises:
        ResourceCapError: If (2·faces)³ exceeds ``triple_cap``
    """
    arr = prepare_arrangement(gq, arrangement)
    triple_rng, *point_rngs = split_rng(rng, 4)
    triple = draw_candidate_triple(arr, gq, epsilon_sel, triple_rng, triple_cap)
    logger.debug("triangle candidates %s of %d", triple, 2 * len(arr.faces))
    halfplanes = tuple(
        candidate_halfplane(arr, candidate, point_rng)
        for candidate, point_rng in zip(triple, point_rngs)
    )
    return Triangle(halfplanes)  # type: ignore[arg-type]


class TriangleSelector:
    """Triangle selection with the score scaled by the full step budget."""

    name = "triangle"
    kind = SampleKind.GRID

    def __init__(self, triple_cap: int = DEFAULT_TRIPLE_CAP):
        if triple_cap < 1:
            raise ParameterError(f"triple cap must be positive, got {triple_cap}")
        self.triple_cap = triple_cap

    def select(
        self, gq: GeometricQuality, step_epsilon: float, rng: np.random.Generator
    ) -> Triangle:
        return select_triangle(gq, step_epsilon, rng, triple_cap=self.triple_cap)

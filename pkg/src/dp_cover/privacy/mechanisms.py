"""Laplace noise and the finite exponential mechanism."""

from __future__ import annotations

import math
from collections.abc import Hashable, Sequence
from dataclasses import dataclass, field
from typing import Any

import numpy as np
from scipy.special import logsumexp

from ..errors import ParameterError


def _check_scale(scale: float) -> None:
    if not (math.isfinite(scale) and scale > 0):
        raise ParameterError(f"Laplace scale must be a positive finite number, got {scale}")


def sample_laplace(
    scale: float,
    rng: np.random.Generator,
    size: int | None = None,
) -> float | np.ndarray:
    """Draw from the zero-centred Laplace distribution with density exp(-|x|/b)/(2b).

    Args:
        scale: The scale b
        rng: Random source
        size: Number of draws; ``None`` returns a single float

    Returns:
        One draw, or an array of ``size`` draws
    """
    _check_scale(scale)
    if size is None:
        return float(rng.laplace(0.0, scale))
    return rng.laplace(0.0, scale, size=size)


def floored_laplace(
    scale: float,
    rng: np.random.Generator,
    size: int | None = None,
) -> int | np.ndarray:
    """Floor of a Laplace draw, the integer noise used by the threshold step."""
    draws = sample_laplace(scale, rng, size=size)
    if size is None:
        return math.floor(draws)
    return np.floor(draws).astype(np.int64)


def laplace_tail_bound(scale: float, beta: float) -> float:
    """Return the Δ with Pr[|Lap(scale)| > Δ] = beta."""
    _check_scale(scale)
    if not 0 < beta < 1:
        raise ParameterError(f"beta must lie in (0, 1), got {beta}")
    return scale * math.log(1.0 / beta)


@dataclass(frozen=True)
class QualityTable:
    """Scores of a finite candidate set.

    Attributes:
        candidates: Candidate identifiers, in a fixed order
        scores: One finite score per candidate
    """

    candidates: tuple[Hashable, ...]
    scores: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        candidates = tuple(self.candidates)
        scores = np.asarray(self.scores, dtype=np.float64).reshape(-1)
        if not candidates:
            raise ParameterError("quality table has no candidates")
        if len(candidates) != len(scores):
            raise ParameterError(
                f"{len(candidates)} candidates but {len(scores)} scores"
            )
        if np.isnan(scores).any():
            raise ParameterError("quality table contains a NaN score")
        if not np.isfinite(scores).all():
            raise ParameterError("quality table contains an infinite score")
        scores.setflags(write=False)
        object.__setattr__(self, "candidates", candidates)
        object.__setattr__(self, "scores", scores)

    def __len__(self) -> int:
        return len(self.candidates)

    @classmethod
    def from_pairs(cls, pairs: Sequence[tuple[Hashable, float]]) -> QualityTable:
        return cls(tuple(c for c, _ in pairs), np.array([s for _, s in pairs], dtype=np.float64))

    def shifted(self, offset: float) -> QualityTable:
        return QualityTable(self.candidates, self.scores + offset)

    def to_dict(self) -> dict[str, Any]:
        return {
            "candidates": [str(c) for c in self.candidates],
            "scores": self.scores.tolist(),
        }


def log_normalize(log_weights: np.ndarray) -> np.ndarray:
    """Turn unnormalised log-weights into log-probabilities (log-sum-exp stable)."""
    log_weights = np.asarray(log_weights, dtype=np.float64)
    if log_weights.size == 0:
        raise ParameterError("cannot normalise an empty weight vector")
    if np.isnan(log_weights).any():
        raise ParameterError("log-weights contain NaN")
    return log_weights - logsumexp(log_weights)


def normalize_log_weights(log_weights: np.ndarray) -> np.ndarray:
    """Probabilities proportional to exp(log_weights), max-subtracted before exponentiating."""
    log_weights = np.asarray(log_weights, dtype=np.float64)
    if log_weights.size == 0:
        raise ParameterError("cannot normalise an empty weight vector")
    if np.isnan(log_weights).any():
        raise ParameterError("log-weights contain NaN")
    weights = np.exp(log_weights - log_weights.max())
    return weights / weights.sum()


def sample_log_categorical(log_weights: np.ndarray, rng: np.random.Generator) -> int:
    """Draw an index with probability proportional to exp(log_weights)."""
    probabilities = normalize_log_weights(log_weights)
    cumulative = np.cumsum(probabilities)
    index = int(np.searchsorted(cumulative, rng.random() * cumulative[-1], side="right"))
    return min(index, len(probabilities) - 1)


def log_selection_pmf(q: QualityTable, step_epsilon: float) -> np.ndarray:
    """Log-probabilities of the finite exponential mechanism."""
    _check_epsilon(step_epsilon)
    return log_normalize(step_epsilon * q.scores / 2.0)


def exact_selection_pmf(q: QualityTable, step_epsilon: float) -> np.ndarray:
    """Closed form of :func:`exp_mech_finite`: p_i ∝ exp(step_epsilon * q_i / 2).

    Args:
        q: Candidate scores
        step_epsilon: Privacy parameter of this selection

    Returns:
        Probability vector aligned with ``q.candidates``
    """
    _check_epsilon(step_epsilon)
    return normalize_log_weights(step_epsilon * q.scores / 2.0)


def exp_mech_finite(q: QualityTable, step_epsilon: float, rng: np.random.Generator) -> Hashable:
    """Select a candidate with probability proportional to exp(step_epsilon * q / 2)."""
    _check_epsilon(step_epsilon)
    index = sample_log_categorical(step_epsilon * q.scores / 2.0, rng)
    return q.candidates[index]


def _check_epsilon(epsilon: float) -> None:
    if not (math.isfinite(epsilon) and epsilon > 0):
        raise ParameterError(f"epsilon must be a positive finite number, got {epsilon}")

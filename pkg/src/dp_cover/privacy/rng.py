"""Seedable random sources.

Every random draw in the package comes from a ``numpy.random.Generator``. A run
starts from one root generator and derives independent child streams with
``Generator.spawn``, so the sequence of draws depends only on the seed and on
the order in which streams are split.
"""

from __future__ import annotations

import numpy as np

from ..errors import ParameterError


def make_rng(seed: int | None) -> np.random.Generator:
    """Create a root generator from an integer seed (``None`` for OS entropy)."""
    if seed is not None and seed < 0:
        raise ParameterError(f"seed must be non-negative, got {seed}")
    return np.random.default_rng(seed)


def split_rng(rng: np.random.Generator, count: int) -> list[np.random.Generator]:
    """Derive ``count`` independent child generators from ``rng``.

    Args:
        rng: Parent generator
        count: Number of children

    Returns:
        List of child generators, deterministic given the parent's seed and
        the number of earlier splits
    """
    if count < 0:
        raise ParameterError(f"cannot split into {count} streams")
    return rng.spawn(count)

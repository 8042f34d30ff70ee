"""Shared fixtures."""

from __future__ import annotations

import numpy as np
import pytest

from dp_cover.concepts.base import GridSpec, LabeledSample
from dp_cover.privacy.rng import make_rng


@pytest.fixture
def rng() -> np.random.Generator:
    return make_rng(1234)


@pytest.fixture
def grid8() -> GridSpec:
    return GridSpec(8)


@pytest.fixture
def triangle_sample() -> LabeledSample:
    """Twelve labelled points: positives inside the triangle (1,1),(7,1),(1,7)."""
    positives = [(2, 2), (3, 2), (2, 3), (1, 1), (4, 2), (2, 4)]
    negatives = [(6, 6), (7, 7), (0, 0), (8, 0), (0, 8), (5, 5)]
    points = positives + negatives
    labels = [1] * len(positives) + [0] * len(negatives)
    return LabeledSample.grid_sample(points, labels, 8)

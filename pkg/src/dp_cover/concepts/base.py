"""Example domains and labelled samples."""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Any

import numpy as np

from ..errors import ParameterError


class SampleKind(str, Enum):
    """The two example domains the learners work over."""

    GRID = "grid"  # points of {0,…,d}²
    BOOL = "bool"  # vectors in {0,1}^d


@dataclass(frozen=True)
class GridSpec:
    """The discrete grid X_d² = {0,…,d}² and its dual box [-2d², 2d²]².

    Attributes:
        d: Grid resolution (examples have integer coordinates in [0, d])
    """

    d: int

    def __post_init__(self) -> None:
        if isinstance(self.d, bool) or not isinstance(self.d, (int, np.integer)):
            raise ParameterError(f"grid resolution must be an integer, got {self.d!r}")
        if self.d < 1:
            raise ParameterError(f"grid resolution must be at least 1, got {self.d}")
        object.__setattr__(self, "d", int(self.d))

    @property
    def box_half_width(self) -> int:
        """A = 2d², the half-width of the dual box."""
        return 2 * self.d * self.d

    @property
    def shift(self) -> int:
        """Offset 4d² that moves the z=-1 copy of the dual box."""
        return 4 * self.d * self.d

    @property
    def box_area(self) -> Fraction:
        return Fraction((2 * self.box_half_width) ** 2)

    @property
    def size(self) -> int:
        """Number of grid points, (d+1)²."""
        return (self.d + 1) ** 2

    def contains(self, x: int, y: int) -> bool:
        return 0 <= x <= self.d and 0 <= y <= self.d

    def points(self) -> np.ndarray:
        """All grid points as an int64 array of shape ((d+1)², 2), x-major."""
        axis = np.arange(self.d + 1, dtype=np.int64)
        xs, ys = np.meshgrid(axis, axis, indexing="ij")
        return np.column_stack([xs.ravel(), ys.ravel()])

    def point_index(self, points: np.ndarray) -> np.ndarray:
        """Row of each point in :meth:`points`."""
        points = np.asarray(points, dtype=np.int64)
        return points[:, 0] * (self.d + 1) + points[:, 1]


@dataclass(frozen=True)
class LabeledSample:
    """An immutable labelled sample S = ((x_i, σ_i)).

    Attributes:
        points: Grid points, shape (n, 2), or Boolean vectors, shape (n, d)
        labels: Labels in {0, 1}, shape (n,)
        kind: Example domain
        d: Grid resolution, or number of Boolean variables
    """

    points: np.ndarray = field(repr=False)
    labels: np.ndarray = field(repr=False)
    kind: SampleKind
    d: int

    def __post_init__(self) -> None:
        kind = SampleKind(self.kind)
        if self.d < 1:
            raise ParameterError(f"d must be at least 1, got {self.d}")
        width = 2 if kind is SampleKind.GRID else self.d

        points = np.asarray(self.points, dtype=np.int64)
        if points.size == 0:
            points = points.reshape(0, width)
        if points.ndim != 2 or points.shape[1] != width:
            raise ParameterError(
                f"{kind.value} examples must have {width} coordinates, got shape {points.shape}"
            )
        labels = np.asarray(self.labels, dtype=np.int64).reshape(-1)
        if len(labels) != len(points):
            raise ParameterError(f"{len(points)} examples but {len(labels)} labels")
        if labels.size and not np.isin(labels, (0, 1)).all():
            raise ParameterError("labels must be 0 or 1")

        upper = self.d if kind is SampleKind.GRID else 1
        if points.size and (points.min() < 0 or points.max() > upper):
            raise ParameterError(f"coordinates must lie in [0, {upper}]")

        points = points.copy()
        labels = labels.astype(np.uint8)
        points.setflags(write=False)
        labels.setflags(write=False)
        object.__setattr__(self, "points", points)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "d", int(self.d))

    @classmethod
    def grid_sample(
        cls, points: Sequence[Sequence[int]] | np.ndarray, labels: Sequence[int], d: int
    ) -> LabeledSample:
        return cls(np.asarray(points, dtype=np.int64), np.asarray(labels), SampleKind.GRID, d)

    @classmethod
    def bool_sample(
        cls, vectors: Sequence[Sequence[int]] | np.ndarray, labels: Sequence[int], d: int
    ) -> LabeledSample:
        return cls(np.asarray(vectors, dtype=np.int64), np.asarray(labels), SampleKind.BOOL, d)

    def __len__(self) -> int:
        return len(self.labels)

    @property
    def grid(self) -> GridSpec:
        if self.kind is not SampleKind.GRID:
            raise ParameterError("Boolean samples have no grid")
        return GridSpec(self.d)

    def negatives(self) -> np.ndarray:
        """Indices of S⁰."""
        return np.flatnonzero(self.labels == 0)

    def positives(self) -> np.ndarray:
        """Indices of S¹."""
        return np.flatnonzero(self.labels == 1)

    def count(self, label: int) -> int:
        return int(np.count_nonzero(self.labels == label))

    def subset(self, indices: Sequence[int] | np.ndarray) -> LabeledSample:
        indices = np.asarray(indices, dtype=np.int64)
        return LabeledSample(self.points[indices], self.labels[indices], self.kind, self.d)

    def flipped(self) -> LabeledSample:
        """The same examples with every label complemented."""
        return LabeledSample(self.points, 1 - self.labels, self.kind, self.d)

    def with_example(self, point: Sequence[int], label: int) -> LabeledSample:
        """A neighbouring sample with one example appended (it gets index n)."""
        row = np.asarray(point, dtype=np.int64).reshape(1, -1)
        return LabeledSample(
            np.vstack([self.points, row]),
            np.append(self.labels, label),
            self.kind,
            self.d,
        )

    def to_dict(self) -> dict[str, Any]:
        return {
            "kind": self.kind.value,
            "d": self.d,
            "points": self.points.tolist(),
            "labels": self.labels.tolist(),
        }

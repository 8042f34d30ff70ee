"""Example distributions over the grid and the Boolean cube."""

from __future__ import annotations

from enum import Enum

import numpy as np

from ..concepts.base import GridSpec
from ..errors import ParameterError
from .targets import PolygonTarget, TargetConcept


class Distribution(str, Enum):
    UNIFORM_GRID = "uniform-grid"
    BOUNDARY_MIXTURE = "boundary-mixture"
    UNIFORM_BOOL = "uniform-bool"


def _check_n(n: int) -> None:
    if n < 1:
        raise ParameterError(f"sample size must be at least 1, got {n}")


def sample_grid_uniform(n: int, grid: GridSpec, rng: np.random.Generator) -> np.ndarray:
    """n i.i.d. uniform points of X_d², shape (n, 2)."""
    _check_n(n)
    return rng.integers(0, grid.d + 1, size=(n, 2), dtype=np.int64)


def sample_boolean(n: int, d: int, rng: np.random.Generator) -> np.ndarray:
    """n i.i.d. uniform vectors of {0, 1}^d."""
    _check_n(n)
    if d < 1:
        raise ParameterError(f"need at least one variable, got {d}")
    return rng.integers(0, 2, size=(n, d), dtype=np.int64)


def sample_boundary_mixture(
    n: int,
    grid: GridSpec,
    target: PolygonTarget,
    sigma: float,
    rng: np.random.Generator,
) -> np.ndarray:
    """Half uniform points, half points within L∞ distance σ·d of the target boundary.

    A boundary point is drawn uniformly by length along the polygon edges, moved by
    an integer offset in [−r, r]² with r = ⌊σ·d⌋, rounded to the grid and clamped.
    """
    _check_n(n)
    if sigma < 0:
        raise ParameterError(f"sigma must be non-negative, got {sigma}")

    near = n // 2
    uniform = rng.integers(0, grid.d + 1, size=(n - near, 2), dtype=np.int64)

    starts: list[tuple[int, int]] = []
    ends: list[tuple[int, int]] = []
    for polygon in target.polygons:
        for i, start in enumerate(polygon):
            starts.append(start)
            ends.append(polygon[(i + 1) % len(polygon)])
    start_arr = np.asarray(starts, dtype=np.float64)
    end_arr = np.asarray(ends, dtype=np.float64)
    lengths = np.linalg.norm(end_arr - start_arr, axis=1)

    edges = rng.choice(len(lengths), size=near, p=lengths / lengths.sum())
    t = rng.random(near)[:, None]
    on_boundary = start_arr[edges] + t * (end_arr[edges] - start_arr[edges])
    radius = int(np.floor(sigma * grid.d))
    offsets = rng.integers(-radius, radius + 1, size=(near, 2))
    moved = np.rint(on_boundary).astype(np.int64) + offsets
    moved = np.clip(moved, 0, grid.d)

    points = np.vstack([uniform, moved])
    return points[rng.permutation(n)]


def sample_distribution(
    dist: Distribution | str,
    n: int,
    d: int,
    rng: np.random.Generator,
    target: TargetConcept | None = None,
    sigma: float = 0.05,
) -> np.ndarray:
    """Draw n points from the named distribution.

    Args:
        dist: Distribution name
        n: Number of points
        d: Grid resolution, or number of Boolean variables
        rng: Random source
        target: Target polygon (boundary mixture only)
        sigma: Boundary band half-width as a fraction of d

    Returns:
        Integer array of points
    """
    dist = Distribution(dist)
    if dist is Distribution.UNIFORM_BOOL:
        return sample_boolean(n, d, rng)
    grid = GridSpec(d)
    if dist is Distribution.UNIFORM_GRID:
        return sample_grid_uniform(n, grid, rng)
    if not isinstance(target, PolygonTarget):
        raise ParameterError("the boundary mixture needs a polygon target")
    return sample_boundary_mixture(n, grid, target, sigma, rng)

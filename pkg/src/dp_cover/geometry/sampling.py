"""Uniform sampling of exact rational points inside a convex face."""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from ..errors import GeometryError
from .arrangement import Face
from .exact import Point, cross

DEFAULT_PRECISION_BITS = 30


def _open_unit_draw(rng: np.random.Generator, bits: int) -> Fraction:
    """Uniform on the midpoints (2U+1)/2^(bits+1), never 0 or 1."""
    u = int(rng.integers(0, 1 << bits))
    return Fraction(2 * u + 1, 1 << (bits + 1))


def uniform_point_in_triangle(
    p0: Point,
    p1: Point,
    p2: Point,
    rng: np.random.Generator,
    bits: int = DEFAULT_PRECISION_BITS,
) -> Point:
    """Strictly interior point of a triangle, uniform up to a 2^-(bits+1) lattice."""
    while True:
        u = _open_unit_draw(rng, bits)
        v = _open_unit_draw(rng, bits)
        if u + v > 1:
            u, v = 1 - u, 1 - v
        if u + v < 1:
            break
    return (
        p0[0] + u * (p1[0] - p0[0]) + v * (p2[0] - p0[0]),
        p0[1] + u * (p1[1] - p0[1]) + v * (p2[1] - p0[1]),
    )


def uniform_point_in_face(
    face: Face,
    rng: np.random.Generator,
    bits: int = DEFAULT_PRECISION_BITS,
) -> Point:
    """Draw a point uniformly from the interior of a convex face.

    The face is fan-triangulated from its first vertex; a triangle is chosen with
    probability proportional to its exact area and a point is drawn inside it.

    Args:
        face: Convex face with counterclockwise vertices
        rng: Random source
        bits: Resolution of the barycentric draw

    Returns:
        An exact rational point strictly inside the face
    """
    vertices = face.vertices
    if len(vertices) < 3 or face.area <= 0:
        raise GeometryError(f"degenerate face with {len(vertices)} vertices, area {face.area}")

    anchor = vertices[0]
    fans = [(vertices[i], vertices[i + 1]) for i in range(1, len(vertices) - 1)]
    areas = [cross(anchor, p, q) / 2 for p, q in fans]
    if any(area < 0 for area in areas):
        raise GeometryError("face vertices are not in counterclockwise convex order")

    total = sum(areas, Fraction(0))
    weights = np.array([float(area / total) for area in areas], dtype=np.float64)
    choice = int(rng.choice(len(fans), p=weights / weights.sum()))
    p, q = fans[choice]
    return uniform_point_in_triangle(anchor, p, q, rng, bits)

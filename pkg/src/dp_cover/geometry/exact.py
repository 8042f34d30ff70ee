"""Exact rational polygon helpers."""

from __future__ import annotations

import math
from collections.abc import Sequence
from fractions import Fraction

Point = tuple[Fraction, Fraction]


def as_point(a: Fraction | int, b: Fraction | int) -> Point:
    return (Fraction(a), Fraction(b))


def cross(o: Point, p: Point, q: Point) -> Fraction:
    """Twice the signed area of the triangle (o, p, q); positive when counterclockwise."""
    return (p[0] - o[0]) * (q[1] - o[1]) - (p[1] - o[1]) * (q[0] - o[0])


def polygon_area(vertices: Sequence[Point]) -> Fraction:
    """Signed shoelace area; positive for counterclockwise vertex order."""
    total = Fraction(0)
    count = len(vertices)
    for i in range(count):
        a1, b1 = vertices[i]
        a2, b2 = vertices[(i + 1) % count]
        total += a1 * b2 - a2 * b1
    return total / 2


def vertex_average(vertices: Sequence[Point]) -> Point:
    """Mean of the vertices; strictly interior for a non-degenerate convex polygon."""
    count = len(vertices)
    return (
        sum((v[0] for v in vertices), Fraction(0)) / count,
        sum((v[1] for v in vertices), Fraction(0)) / count,
    )


def box_polygon(half_width: int | Fraction) -> list[Point]:
    """Counterclockwise square [-w, w]²."""
    w = Fraction(half_width)
    return [(-w, -w), (w, -w), (w, w), (-w, w)]


def clip_polygon(
    vertices: Sequence[Point],
    alpha: Fraction | int,
    beta: Fraction | int,
    gamma: Fraction | int,
) -> list[Point]:
    """Keep the part of a convex polygon where alpha·a + beta·b ≤ gamma.

    Args:
        vertices: Convex polygon, counterclockwise
        alpha: Coefficient of the first coordinate
        beta: Coefficient of the second coordinate
        gamma: Right-hand side

    Returns:
        The clipped polygon (possibly empty or degenerate), counterclockwise
    """
    result: list[Point] = []
    count = len(vertices)
    for i in range(count):
        p = vertices[i]
        q = vertices[(i + 1) % count]
        fp = alpha * p[0] + beta * p[1] - gamma
        fq = alpha * q[0] + beta * q[1] - gamma
        if fp <= 0:
            result.append(p)
        if (fp < 0 < fq) or (fq < 0 < fp):
            t = Fraction(fp) / (fp - fq)
            result.append((p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])))

    deduped: list[Point] = []
    for point in result:
        if not deduped or deduped[-1] != point:
            deduped.append(point)
    if len(deduped) > 1 and deduped[0] == deduped[-1]:
        deduped.pop()
    return deduped


def fraction_log(value: Fraction) -> float:
    """Natural log of a positive rational without overflowing floats."""
    value = Fraction(value)
    if value <= 0:
        raise ValueError(f"log of non-positive value {value}")
    return math.log(value.numerator) - math.log(value.denominator)

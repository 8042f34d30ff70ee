"""Target concepts: literal conjunctions/disjunctions and grid polygons."""

from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass
from typing import Any, Union

import numpy as np

from ..concepts.base import GridSpec, LabeledSample, SampleKind
from ..concepts.expr import ExprNode, Literal, conjunction, disjunction
from ..errors import ParameterError
from ..learners import ConceptClass, TaskSpec

GridPoint = tuple[int, int]
MAX_ATTEMPTS = 1000


@dataclass(frozen=True)
class ConjunctionTarget:
    """AND (or OR, when ``disjunctive``) of literals over d variables."""

    literals: tuple[Literal, ...]
    d: int
    disjunctive: bool = False

    def __post_init__(self) -> None:
        object.__setattr__(self, "literals", tuple(self.literals))
        for literal in self.literals:
            if literal.variable_index >= self.d:
                raise ParameterError(
                    f"literal on variable {literal.variable_index} outside {self.d} variables"
                )

    @property
    def kind(self) -> SampleKind:
        return SampleKind.BOOL

    def evaluate_points(self, vectors: np.ndarray) -> np.ndarray:
        vectors = np.asarray(vectors, dtype=np.int64).reshape(-1, self.d)
        if self.disjunctive:
            result = np.zeros(len(vectors), dtype=np.uint8)
            for literal in self.literals:
                result |= literal.evaluate_points(vectors)
        else:
            result = np.ones(len(vectors), dtype=np.uint8)
            for literal in self.literals:
                result &= literal.evaluate_points(vectors)
        return result

    def to_expr(self) -> ExprNode:
        return disjunction(self.literals) if self.disjunctive else conjunction(self.literals)


def _orientation(p: GridPoint, q: GridPoint, r: GridPoint) -> int:
    value = (q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0])
    return (value > 0) - (value < 0)


def _on_segment(p: GridPoint, q: GridPoint, r: GridPoint) -> bool:
    """r on the closed segment pq, given the three are collinear."""
    within_x = min(p[0], q[0]) <= r[0] <= max(p[0], q[0])
    return within_x and min(p[1], q[1]) <= r[1] <= max(p[1], q[1])


def _segments_touch(p1: GridPoint, p2: GridPoint, q1: GridPoint, q2: GridPoint) -> bool:
    o1 = _orientation(p1, p2, q1)
    o2 = _orientation(p1, p2, q2)
    o3 = _orientation(q1, q2, p1)
    o4 = _orientation(q1, q2, p2)
    if o1 != o2 and o3 != o4 and 0 not in (o1, o2, o3, o4):
        return True
    return (
        (o1 == 0 and _on_segment(p1, p2, q1))
        or (o2 == 0 and _on_segment(p1, p2, q2))
        or (o3 == 0 and _on_segment(q1, q2, p1))
        or (o4 == 0 and _on_segment(q1, q2, p2))
    )


def doubled_area(vertices: Sequence[GridPoint]) -> int:
    """Twice the signed area (positive for counterclockwise order)."""
    total = 0
    for i, (x1, y1) in enumerate(vertices):
        x2, y2 = vertices[(i + 1) % len(vertices)]
        total += x1 * y2 - x2 * y1
    return total


def is_simple_polygon(vertices: Sequence[GridPoint]) -> bool:
    """Closed chain without self-intersections and with non-zero area."""
    count = len(vertices)
    if count < 3 or len(set(vertices)) != count or doubled_area(vertices) == 0:
        return False
    edges = [(vertices[i], vertices[(i + 1) % count]) for i in range(count)]
    for i in range(count):
        for j in range(i + 1, count):
            adjacent = j == i + 1 or (i == 0 and j == count - 1)
            (p1, p2), (q1, q2) = edges[i], edges[j]
            if adjacent:
                # Neighbouring edges share one vertex; they may not fold back onto each other.
                shared = p2 if j == i + 1 else p1
                far_p = p1 if shared == p2 else p2
                far_q = q2 if shared == q1 else q1
                if _orientation(far_p, shared, far_q) == 0 and (
                    _on_segment(shared, far_p, far_q) or _on_segment(shared, far_q, far_p)
                ):
                    return False
                continue
            if _segments_touch(p1, p2, q1, q2):
                return False
    return True


def is_strictly_convex(vertices: Sequence[GridPoint]) -> bool:
    count = len(vertices)
    if count < 3:
        return False
    turns = {
        _orientation(vertices[i], vertices[(i + 1) % count], vertices[(i + 2) % count])
        for i in range(count)
    }
    return turns in ({1}, {-1}) and is_simple_polygon(vertices)


def polygon_contains(vertices: Sequence[GridPoint], points: np.ndarray) -> np.ndarray:
    """Exact inclusive point-in-polygon for integer points (boundary counts as inside)."""
    points = np.asarray(points, dtype=np.int64).reshape(-1, 2)
    x, y = points[:, 0], points[:, 1]
    inside = np.zeros(len(points), dtype=bool)
    on_boundary = np.zeros(len(points), dtype=bool)
    count = len(vertices)
    for i in range(count):
        x1, y1 = vertices[i]
        x2, y2 = vertices[(i + 1) % count]
        cross = (x2 - x1) * (y - y1) - (y2 - y1) * (x - x1)
        on_boundary |= (
            (cross == 0)
            & (min(x1, x2) <= x)
            & (x <= max(x1, x2))
            & (min(y1, y2) <= y)
            & (y <= max(y1, y2))
        )
        straddles = (y1 > y) != (y2 > y)
        # The edge crosses the ray to the right iff the point is left of it, read upwards.
        inside ^= straddles & ((cross > 0) == (y2 > y1))
    return inside | on_boundary


@dataclass(frozen=True)
class PolygonTarget:
    """Union of simple polygons with integer vertices on the grid."""

    polygons: tuple[tuple[GridPoint, ...], ...]
    d: int
    convex: bool = False

    def __post_init__(self) -> None:
        polygons = tuple(
            tuple((int(x), int(y)) for x, y in polygon) for polygon in self.polygons
        )
        if not polygons:
            raise ParameterError("a polygon target needs at least one polygon")
        grid = GridSpec(self.d)
        for polygon in polygons:
            if not is_simple_polygon(polygon):
                raise ParameterError(f"not a simple polygon: {polygon}")
            if self.convex and not is_strictly_convex(polygon):
                raise ParameterError(f"not strictly convex: {polygon}")
            if not all(grid.contains(x, y) for x, y in polygon):
                raise ParameterError(f"polygon {polygon} leaves the grid [0, {self.d}]²")
        if self.convex and len(polygons) != 1:
            raise ParameterError("a convex target is a single polygon")
        object.__setattr__(self, "polygons", polygons)

    @property
    def kind(self) -> SampleKind:
        return SampleKind.GRID

    @property
    def edge_count(self) -> int:
        return sum(len(polygon) for polygon in self.polygons)

    def evaluate_points(self, points: np.ndarray) -> np.ndarray:
        points = np.asarray(points, dtype=np.int64).reshape(-1, 2)
        result = np.zeros(len(points), dtype=bool)
        for polygon in self.polygons:
            result |= polygon_contains(polygon, points)
        return result.astype(np.uint8)


TargetConcept = Union[ConjunctionTarget, PolygonTarget]


def label_by_target(points: np.ndarray, target: TargetConcept) -> LabeledSample:
    """Label points with the target's exact value."""
    points = np.asarray(points, dtype=np.int64)
    labels = target.evaluate_points(points)
    return LabeledSample(points, labels, target.kind, target.d)


def random_conjunction(
    k: int, d: int, rng: np.random.Generator, disjunctive: bool = False
) -> ConjunctionTarget:
    """k literals on distinct variables with random signs."""
    if not 1 <= k <= d:
        raise ParameterError(f"need 1 ≤ k ≤ d, got k={k}, d={d}")
    variables = sorted(int(v) for v in rng.choice(d, size=k, replace=False))
    signs = rng.integers(0, 2, size=k)
    literals = tuple(Literal(v, bool(s)) for v, s in zip(variables, signs))
    return ConjunctionTarget(literals, d, disjunctive)


def _random_grid_point(grid: GridSpec, rng: np.random.Generator) -> GridPoint:
    x, y = rng.integers(0, grid.d + 1, size=2)
    return int(x), int(y)


def random_triangle(
    grid: GridSpec, rng: np.random.Generator, min_area_fraction: float = 0.05
) -> tuple[GridPoint, GridPoint, GridPoint]:
    """Counterclockwise grid triangle covering at least a fraction of the grid square."""
    threshold = 2 * min_area_fraction * grid.d * grid.d
    for _ in range(MAX_ATTEMPTS):
        triangle = [_random_grid_point(grid, rng) for _ in range(3)]
        area2 = doubled_area(triangle)
        if area2 < 0:
            triangle.reverse()
            area2 = -area2
        if area2 > 0 and area2 >= threshold:
            return tuple(triangle)  # type: ignore[return-value]
    raise ParameterError(f"no triangle with area fraction {min_area_fraction} on grid {grid.d}")


def convex_hull(points: Sequence[GridPoint]) -> list[GridPoint]:
    """Monotone chain hull, counterclockwise, collinear points dropped."""
    pts = sorted(set(points))
    if len(pts) < 3:
        return pts

    def half(chain_points: Sequence[GridPoint]) -> list[GridPoint]:
        chain: list[GridPoint] = []
        for p in chain_points:
            while len(chain) >= 2 and _orientation(chain[-2], chain[-1], p) <= 0:
                chain.pop()
            chain.append(p)
        return chain

    lower = half(pts)
    upper = half(list(reversed(pts)))
    return lower[:-1] + upper[:-1]


def random_convex_polygon(
    k: int, grid: GridSpec, rng: np.random.Generator, min_area_fraction: float = 0.05
) -> tuple[GridPoint, ...]:
    """Strictly convex polygon with at most k (and at least 3) vertices."""
    if k < 3:
        raise ParameterError(f"a convex polygon needs k ≥ 3, got {k}")
    threshold = 2 * min_area_fraction * grid.d * grid.d
    for _ in range(MAX_ATTEMPTS):
        hull = convex_hull([_random_grid_point(grid, rng) for _ in range(4 * k)])
        if len(hull) < 3:
            continue
        keep = min(k, len(hull))
        chosen = sorted(int(i) for i in rng.choice(len(hull), size=keep, replace=False))
        polygon = tuple(hull[i] for i in chosen)
        if doubled_area(polygon) >= max(threshold, 1) and is_strictly_convex(polygon):
            return polygon
    raise ParameterError(f"could not draw a convex {k}-gon on grid {grid.d}")


def random_simple_polygon(
    k: int, grid: GridSpec, rng: np.random.Generator, min_area_fraction: float = 0.05
) -> tuple[GridPoint, ...]:
    """Counterclockwise simple k-gon, usually non-convex.

    k distinct grid points are joined in angular order around their centroid,
    which gives a star-shaped polygon; draws that come out degenerate are retried.
    """
    if k < 3:
        raise ParameterError(f"a polygon needs k ≥ 3, got {k}")
    threshold = max(2 * min_area_fraction * grid.d * grid.d, 1)
    for _ in range(MAX_ATTEMPTS):
        points = {_random_grid_point(grid, rng) for _ in range(k)}
        if len(points) < k:
            continue
        cx = sum(x for x, _ in points) / k
        cy = sum(y for _, y in points) / k
        polygon = sorted(
            points,
            key=lambda p: (math.atan2(p[1] - cy, p[0] - cx), (p[0] - cx) ** 2 + (p[1] - cy) ** 2),
        )
        if doubled_area(polygon) < 0:
            polygon.reverse()
        if doubled_area(polygon) >= threshold and is_simple_polygon(polygon):
            return tuple(polygon)
    raise ParameterError(f"could not draw a simple {k}-gon on grid {grid.d}")


def random_union(
    k: int, grid: GridSpec, rng: np.random.Generator, polygons: int | None = None
) -> tuple[tuple[GridPoint, ...], ...]:
    """Simple polygons whose edge counts add up to exactly k.

    Args:
        k: Total edge budget (at least 3)
        grid: Grid the vertices lie on
        rng: Random source
        polygons: Number of polygons; drawn uniformly from [1, k // 3] when omitted

    Returns:
        Counterclockwise polygons, each with at least 3 edges
    """
    if k < 3:
        raise ParameterError(f"a union of polygons needs k ≥ 3 edges, got {k}")
    count = int(rng.integers(1, k // 3 + 1)) if polygons is None else polygons
    if not 1 <= count <= k // 3:
        raise ParameterError(f"{count} polygons do not fit in {k} edges")
    sizes = 3 + rng.multinomial(k - 3 * count, np.full(count, 1.0 / count))
    return tuple(
        random_triangle(grid, rng) if size == 3 else random_simple_polygon(int(size), grid, rng)
        for size in sizes
    )


def make_target(task: TaskSpec, rng: np.random.Generator) -> TargetConcept:
    """A random target of the task's concept class.

    Conjunctions and disjunctions use min(k, d) literals. Unions split k edges
    over between 1 and k // 3 simple polygons, so k must be at least 3.
    """
    concept_class = ConceptClass(task.concept_class)
    if concept_class is ConceptClass.CONJ:
        return random_conjunction(min(task.k, task.d), task.d, rng)
    if concept_class is ConceptClass.DISJ:
        return random_conjunction(min(task.k, task.d), task.d, rng, disjunctive=True)
    grid = GridSpec(task.d)
    if concept_class is ConceptClass.CONVEX_KGON:
        return PolygonTarget((random_convex_polygon(task.k, grid, rng),), task.d, convex=True)
    return PolygonTarget(random_union(task.k, grid, rng), task.d)


def target_to_dict(target: TargetConcept) -> dict[str, Any]:
    if isinstance(target, ConjunctionTarget):
        return {
            "type": "disjunction" if target.disjunctive else "conjunction",
            "d": target.d,
            "literals": [literal.to_dict() for literal in target.literals],
        }
    return {
        "type": "convex_polygon" if target.convex else "polygon_union",
        "d": target.d,
        "polygons": [[list(v) for v in polygon] for polygon in target.polygons],
    }


def target_from_dict(data: dict[str, Any]) -> TargetConcept:
    kind = data.get("type")
    if kind in ("conjunction", "disjunction"):
        literals = tuple(
            Literal(int(item["index"]), bool(item["negated"])) for item in data["literals"]
        )
        return ConjunctionTarget(literals, int(data["d"]), kind == "disjunction")
    if kind in ("convex_polygon", "polygon_union"):
        polygons = tuple(tuple((int(x), int(y)) for x, y in poly) for poly in data["polygons"])
        return PolygonTarget(polygons, int(data["d"]), convex=kind == "convex_polygon")
    raise ParameterError(f"unknown target type {kind!r}")

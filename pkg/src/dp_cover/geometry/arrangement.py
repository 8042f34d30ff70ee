"""Exact arrangement of the dual lines of a grid sample inside the box [-2d², 2d²]².

Every example (x, y) becomes the dual line x·a + b = y in the (a, b) plane. A point
(a, b) off that line is a halfplane y ≥ a·x + b, and it labels the example 0 exactly
when the point lies on the positive side x·a + b − y > 0. The lines and the four box
edges are cut into a half-edge structure whose bounded cycles are the faces.

Vertices are keyed by reduced integer triples (P, Q, W) meaning (P/W, Q/W), so
concurrent lines meet in a single vertex; everything else is rational arithmetic.
"""

from __future__ import annotations

import functools
import logging
import math
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

import numpy as np

from ..concepts.base import GridSpec, LabeledSample, SampleKind
from ..errors import GeometryError, KindMismatchError, ParameterError
from .exact import Point, polygon_area, vertex_average

logger = logging.getLogger(__name__)

# Line α·a + β·b = γ.
Equation = tuple[int, int, int]

_BOX_LINES = 4


@dataclass(frozen=True)
class DualLine:
    """The dual line x·a + b = y of one distinct sample point.

    Attributes:
        x_coeff: Grid x-coordinate
        y_coeff: Grid y-coordinate
        source_indices: Indices of every example at this point
    """

    x_coeff: int
    y_coeff: int
    source_indices: tuple[int, ...]

    @property
    def bits(self) -> int:
        mask = 0
        for index in self.source_indices:
            mask |= 1 << index
        return mask

    def side(self, a: Fraction, b: Fraction) -> Fraction:
        """x·a + b − y; positive when the example lies strictly below y = a·x + b."""
        return self.x_coeff * a + b - self.y_coeff


@dataclass(frozen=True)
class Face:
    """A convex cell of the arrangement.

    Attributes:
        vertices: Counterclockwise exact vertices
        area: Exact area (> 0)
        representative: Vertex average, strictly interior
        below_mask: Bit i set iff y_i < a·x_i + b inside the face
    """

    vertices: tuple[Point, ...]
    area: Fraction
    representative: Point
    below_mask: int

    def to_dict(self, sample_size: int | None = None) -> dict[str, Any]:
        width = max(1, math.ceil((sample_size or 0) / 4))
        return {
            "vertices": [
                [[a.numerator, a.denominator], [b.numerator, b.denominator]]
                for a, b in self.vertices
            ],
            "area": [self.area.numerator, self.area.denominator],
            "representative": [
                [self.representative[0].numerator, self.representative[0].denominator],
                [self.representative[1].numerator, self.representative[1].denominator],
            ],
            "mask": f"0x{self.below_mask:0{width}x}",
        }


@dataclass(frozen=True)
class Arrangement:
    """Partition of the dual box into faces, with per-face classification masks."""

    grid: GridSpec
    lines: tuple[DualLine, ...]
    faces: tuple[Face, ...]
    vertices: tuple[Point, ...] = field(repr=False)
    sample_size: int = 0

    @property
    def box_area(self) -> Fraction:
        return self.grid.box_area

    @property
    def all_mask(self) -> int:
        return (1 << self.sample_size) - 1

    def face_count_bound(self) -> int:
        """L² + L + 1 for L distinct lines."""
        count = len(self.lines)
        return count * count + count + 1

    @property
    def word_count(self) -> int:
        return mask_word_count(self.sample_size)

    def mask_words(self) -> np.ndarray:
        """Below masks packed into uint64 words, shape (faces, word_count).

        Bit i of the mask sits in word i // 64 at position i % 64; padding bits are 0.
        """
        width = self.word_count
        if not self.faces:
            return np.zeros((0, width), dtype=np.uint64)
        raw = b"".join(face.below_mask.to_bytes(8 * width, "little") for face in self.faces)
        return np.frombuffer(raw, dtype="<u8").reshape(len(self.faces), width).astype(np.uint64)

    def all_words(self) -> np.ndarray:
        """Word mask with one bit set per example."""
        return pack_mask_words(np.ones(self.sample_size, dtype=bool), self.word_count)

    def sign_vectors(self) -> set[tuple[bool, ...]]:
        """Per face, which side of each dual line it lies on (True = positive)."""
        return {
            tuple(bool((face.below_mask >> line.source_indices[0]) & 1) for line in self.lines)
            for face in self.faces
        }

    def to_dict(self) -> dict[str, Any]:
        return {
            "d": self.grid.d,
            "box": [-self.grid.box_half_width, self.grid.box_half_width],
            "lines": [
                {"x": line.x_coeff, "y": line.y_coeff, "examples": list(line.source_indices)}
                for line in self.lines
            ],
            "faces": [face.to_dict(self.sample_size) for face in self.faces],
        }


def mask_word_count(n: int) -> int:
    return max(1, (n + 63) // 64)


def pack_mask_words(flags: np.ndarray, width: int) -> np.ndarray:
    """Pack a boolean vector into ``width`` little-endian uint64 words."""
    packed = np.packbits(np.asarray(flags, dtype=bool), bitorder="little")
    if len(packed) > 8 * width:
        raise ParameterError(f"{len(flags)} flags do not fit in {width} words")
    padded = np.zeros(8 * width, dtype=np.uint8)
    padded[: len(packed)] = packed
    return padded.view("<u8").astype(np.uint64)


def popcount(words: np.ndarray) -> np.ndarray:
    """Set bits per row of a word array (summed over the last axis)."""
    return np.bitwise_count(words).sum(axis=-1, dtype=np.int64)


def dual_lines(sample: LabeledSample) -> tuple[DualLine, ...]:
    """One dual line per distinct point, sorted by (x, y)."""
    groups: dict[tuple[int, int], list[int]] = {}
    for index, (x, y) in enumerate(sample.points.tolist()):
        groups.setdefault((x, y), []).append(index)
    return tuple(
        DualLine(x, y, tuple(indices)) for (x, y), indices in sorted(groups.items())
    )


def _intersection(e1: Equation, e2: Equation) -> tuple[int, int, int] | None:
    """Reduced (P, Q, W) with W > 0, or None for parallel lines."""
    a1, b1, c1 = e1
    a2, b2, c2 = e2
    det = a1 * b2 - a2 * b1
    if det == 0:
        return None
    p = c1 * b2 - c2 * b1
    q = a1 * c2 - a2 * c1
    if det < 0:
        det, p, q = -det, -p, -q
    g = math.gcd(math.gcd(p, q), det)
    return p // g, q // g, det // g


def _direction_order(d1: tuple[int, int], d2: tuple[int, int]) -> int:
    """Counterclockwise order of direction vectors, starting from the positive a-axis."""
    h1 = 0 if (d1[1] > 0 or (d1[1] == 0 and d1[0] > 0)) else 1
    h2 = 0 if (d2[1] > 0 or (d2[1] == 0 and d2[0] > 0)) else 1
    if h1 != h2:
        return h1 - h2
    turn = d1[0] * d2[1] - d1[1] * d2[0]
    return -1 if turn > 0 else (1 if turn < 0 else 0)


def build_arrangement(sample: LabeledSample, grid: GridSpec | None = None) -> Arrangement:
    """Build the exact arrangement of the sample's dual lines inside the dual box.

    Args:
        sample: Grid sample; duplicate points share one dual line
        grid: Grid specification (defaults to the sample's own)

    Returns:
        The arrangement with exact areas, interior representatives and masks
    """
    if sample.kind is not SampleKind.GRID:
        raise KindMismatchError("arrangements are built from grid samples")
    grid = grid or sample.grid
    if grid.d != sample.d:
        raise ParameterError(f"sample has d={sample.d} but grid has d={grid.d}")

    half = grid.box_half_width
    lines = dual_lines(sample)
    equations: list[Equation] = [(1, 0, -half), (0, 1, -half), (1, 0, half), (0, 1, half)]
    equations.extend((line.x_coeff, 1, line.y_coeff) for line in lines)

    # Vertices: every pairwise crossing inside the closed box.
    vertex_ids: dict[tuple[int, int, int], int] = {}
    on_line: list[set[int]] = [set() for _ in equations]
    for i in range(len(equations)):
        for j in range(i + 1, len(equations)):
            key = _intersection(equations[i], equations[j])
            if key is None:
                continue
            p, q, w = key
            if not (-half * w <= p <= half * w and -half * w <= q <= half * w):
                continue
            vid = vertex_ids.setdefault(key, len(vertex_ids))
            on_line[i].add(vid)
            on_line[j].add(vid)

    coords: list[Point] = [None] * len(vertex_ids)  # type: ignore[list-item]
    for (p, q, w), vid in vertex_ids.items():
        coords[vid] = (Fraction(p, w), Fraction(q, w))

    # Half-edges: consecutive vertices along each line, in both directions.
    origin: list[int] = []
    twin: list[int] = []
    line_of: list[int] = []
    forward: list[bool] = []
    direction: list[tuple[int, int]] = []
    for li, (alpha, beta, _) in enumerate(equations):
        ordered = sorted(on_line[li], key=lambda v: beta * coords[v][0] - alpha * coords[v][1])
        if len(ordered) < 2:
            raise GeometryError(f"line {equations[li]} meets the box in fewer than two points")
        for u, v in zip(ordered, ordered[1:]):
            h = len(origin)
            origin.extend((u, v))
            twin.extend((h + 1, h))
            line_of.extend((li, li))
            forward.extend((True, False))
            direction.extend(((beta, -alpha), (-beta, alpha)))

    outgoing: list[list[int]] = [[] for _ in coords]
    for h, v in enumerate(origin):
        outgoing[v].append(h)
    position = [0] * len(origin)
    by_angle = functools.cmp_to_key(lambda e1, e2: _direction_order(direction[e1], direction[e2]))
    for edges in outgoing:
        edges.sort(key=by_angle)
        for rank, h in enumerate(edges):
            position[h] = rank

    # The face left of h continues with the edge just clockwise of twin(h).
    following = [0] * len(origin)
    for h in range(len(origin)):
        t = twin[h]
        around = outgoing[origin[t]]
        following[h] = around[(position[t] - 1) % len(around)]

    face_of = [-1] * len(origin)
    cycles: list[list[int]] = []
    for start in range(len(origin)):
        if face_of[start] != -1:
            continue
        cycle = []
        h = start
        while face_of[h] == -1:
            face_of[h] = len(cycles)
            cycle.append(h)
            h = following[h]
        if h != start:
            raise GeometryError("half-edge cycle did not close")
        cycles.append(cycle)

    polygons: list[list[Point]] = []
    areas: list[Fraction] = []
    for cycle in cycles:
        polygon = [coords[origin[h]] for h in cycle]
        polygons.append(polygon)
        areas.append(polygon_area(polygon))

    outer = [c for c, area in enumerate(areas) if area < 0]
    if len(outer) != 1:
        raise GeometryError(f"expected one unbounded cycle, found {len(outer)}")
    bounded = [c for c, area in enumerate(areas) if area > 0]
    face_index = {c: i for i, c in enumerate(bounded)}

    masks = _propagate_masks(
        cycles, bounded, face_index, face_of, twin, line_of, forward, lines, polygons
    )

    faces = tuple(
        Face(
            vertices=tuple(polygons[c]),
            area=areas[c],
            representative=vertex_average(polygons[c]),
            below_mask=masks[face_index[c]],
        )
        for c in bounded
    )
    logger.debug(
        "arrangement: %d lines, %d vertices, %d faces", len(lines), len(coords), len(faces)
    )
    return Arrangement(
        grid=grid,
        lines=lines,
        faces=faces,
        vertices=tuple(coords),
        sample_size=len(sample),
    )


def _propagate_masks(
    cycles: list[list[int]],
    bounded: list[int],
    face_index: dict[int, int],
    face_of: list[int],
    twin: list[int],
    line_of: list[int],
    forward: list[bool],
    lines: tuple[DualLine, ...],
    polygons: list[list[Point]],
) -> list[int]:
    """Compute the root face's mask directly, then flip one line's bits per crossing."""
    masks: list[int | None] = [None] * len(bounded)
    root = bounded[0]
    ra, rb = vertex_average(polygons[root])
    root_mask = 0
    for line in lines:
        if line.side(ra, rb) > 0:
            root_mask |= line.bits
    masks[0] = root_mask

    queue = deque([root])
    while queue:
        c = queue.popleft()
        mask = masks[face_index[c]]
        for h in cycles[c]:
            li = line_of[h]
            if li < _BOX_LINES:
                continue
            neighbour = face_of[twin[h]]
            ni = face_index.get(neighbour)
            if ni is None or masks[ni] is not None:
                continue
            bits = lines[li - _BOX_LINES].bits
            # Left of a forward half-edge is the line's positive side.
            masks[ni] = (mask & ~bits) if forward[h] else (mask | bits)
            queue.append(neighbour)

    if any(m is None for m in masks):
        raise GeometryError("face adjacency graph is disconnected")
    return masks  # type: ignore[return-value]


def line_crossings(arr: Arrangement) -> list[Point]:
    """Distinct points inside the box where two dual lines cross."""
    half = arr.grid.box_half_width
    equations = [(line.x_coeff, 1, line.y_coeff) for line in arr.lines]
    keys: set[tuple[int, int, int]] = set()
    for i in range(len(equations)):
        for j in range(i + 1, len(equations)):
            key = _intersection(equations[i], equations[j])
            if key is None:
                continue
            p, q, w = key
            if -half * w <= p <= half * w and -half * w <= q <= half * w:
                keys.add(key)
    return [(Fraction(p, w), Fraction(q, w)) for p, q, w in keys]


def min_vertex_separation(arr: Arrangement) -> Fraction | float:
    """Smallest squared distance between two distinct crossings of dual lines.

    Box corners and the points where a line leaves the box are not counted: the
    1/d² bound holds only between crossings of two sample lines. Distances are
    square roots, so the exact squared value is returned; compare it against 1/d⁴.
    Returns ``math.inf`` when there are fewer than two crossings.
    """
    points = sorted(line_crossings(arr))
    if len(points) < 2:
        return math.inf
    best: Fraction | None = None
    for i, (a1, b1) in enumerate(points):
        for a2, b2 in points[i + 1 :]:
            da = a2 - a1
            if best is not None and da * da >= best:
                break
            distance = da * da + (b2 - b1) * (b2 - b1)
            if best is None or distance < best:
                best = distance
    return best if best is not None else math.inf


def min_face_area_bound(d: int) -> Fraction:
    """Lower bound 1/(4d⁴) on the area of any face."""
    return Fraction(1, 4 * d**4)


def vertex_separation_bound(d: int) -> Fraction:
    """Lower bound 1/d² on the distance between distinct vertices."""
    return Fraction(1, d * d)

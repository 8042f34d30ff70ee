"""Halfplanes over the grid: the bounded (â, b) encoding and unrestricted halfplanes."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Any

import numpy as np

from ..errors import GeometryError, ParameterError
from ..geometry.exact import box_polygon, clip_polygon, polygon_area, vertex_average
from .base import GridSpec

_INT64_SAFE = 2**62


def _affine_nonnegative(points: np.ndarray, cy: int, cx: int, c0: int) -> np.ndarray:
    """Exact test cy·y − cx·x − c0 ≥ 0 for integer points, row by row."""
    pts = np.asarray(points, dtype=np.int64).reshape(-1, 2)
    if len(pts) == 0:
        return np.zeros(0, dtype=bool)
    largest = int(np.abs(pts).max())
    bound = (abs(cy) + abs(cx)) * max(largest, 1) + abs(c0)
    if bound < _INT64_SAFE:
        values = cy * pts[:, 1] - cx * pts[:, 0] - c0
        return values >= 0
    xs = pts[:, 0].astype(object)
    ys = pts[:, 1].astype(object)
    values = ys * cy - xs * cx - c0
    return np.array([v >= 0 for v in values], dtype=bool)


@dataclass(frozen=True)
class Halfplane:
    """A member of HALFPLANE_d, encoded by (â, b).

    Decoding gives a = â − 4d²·1{â > 2d²} and z = 1 − 2·1{â > 2d²}; the halfplane
    labels (x, y) with 1 iff z·y ≥ z·(a·x + b).

    Attributes:
        a_hat: Encoded slope in [−2d², 6d²]
        b: Intercept in [−2d², 2d²]
        d: Grid resolution
    """

    a_hat: Fraction
    b: Fraction
    d: int

    def __post_init__(self) -> None:
        a_hat = Fraction(self.a_hat)
        b = Fraction(self.b)
        half = 2 * self.d * self.d
        if self.d < 1:
            raise ParameterError(f"grid resolution must be at least 1, got {self.d}")
        if not -half <= a_hat <= 3 * half:
            raise ParameterError(f"â = {a_hat} outside [{-half}, {3 * half}]")
        if not -half <= b <= half:
            raise ParameterError(f"b = {b} outside [{-half}, {half}]")
        object.__setattr__(self, "a_hat", a_hat)
        object.__setattr__(self, "b", b)

    @classmethod
    def from_decoded(cls, a: Fraction | int, b: Fraction | int, z: int, d: int) -> Halfplane:
        """Encode slope ``a``, intercept ``b`` and orientation ``z`` as (â, b)."""
        a = Fraction(a)
        half = 2 * d * d
        if z not in (1, -1):
            raise ParameterError(f"orientation must be +1 or -1, got {z}")
        if not -half <= a <= half:
            raise ParameterError(f"a = {a} outside [{-half}, {half}]")
        if z == -1 and a == -half:
            raise ParameterError("a = -2d² with z = -1 has no (â, b) encoding")
        a_hat = a if z == 1 else a + 2 * half
        return cls(a_hat, Fraction(b), d)

    def decode(self) -> tuple[Fraction, Fraction, int]:
        """Return (a, b, z)."""
        half = 2 * self.d * self.d
        if self.a_hat > half:
            return self.a_hat - 2 * half, self.b, -1
        return self.a_hat, self.b, 1

    @property
    def z(self) -> int:
        return self.decode()[2]

    def evaluate(self, x: int, y: int) -> int:
        a, b, z = self.decode()
        return int(z * y >= z * (a * x + b))

    def evaluate_points(self, points: np.ndarray) -> np.ndarray:
        """Labels of many grid points, exact."""
        a, b, z = self.decode()
        cy = a.denominator * b.denominator
        cx = a.numerator * b.denominator
        c0 = b.numerator * a.denominator
        return _affine_nonnegative(points, z * cy, z * cx, z * c0).astype(np.uint8)

    def complement_interior(self) -> Halfplane:
        """Same boundary line, opposite orientation (agrees off the line with the negation)."""
        a, b, z = self.decode()
        return Halfplane.from_decoded(a, b, -z, self.d)

    def to_general(self) -> GeneralHalfplane:
        a, b, z = self.decode()
        return GeneralHalfplane(z * a, z * b, Fraction(z))

    def to_dict(self) -> dict[str, Any]:
        return {
            "type": "halfplane",
            "a_hat": [self.a_hat.numerator, self.a_hat.denominator],
            "b": [self.b.numerator, self.b.denominator],
            "d": self.d,
        }


@dataclass(frozen=True)
class GeneralHalfplane:
    """An unrestricted halfplane {(x, y) : c·y ≥ a·x + b}."""

    a: Fraction
    b: Fraction
    c: Fraction

    def __post_init__(self) -> None:
        for name in ("a", "b", "c"):
            object.__setattr__(self, name, Fraction(getattr(self, name)))

    @classmethod
    def from_decoded(cls, a: Fraction | int, b: Fraction | int, z: int) -> GeneralHalfplane:
        """The halfplane z·y ≥ z·(a·x + b)."""
        return cls(z * Fraction(a), z * Fraction(b), Fraction(z))

    @classmethod
    def vertical(cls, x1: Fraction | int, z: int) -> GeneralHalfplane:
        """x ≥ x1 when z = +1, x ≤ x1 when z = −1."""
        if z == 1:
            return cls(Fraction(-1), Fraction(x1), Fraction(0))
        if z == -1:
            return cls(Fraction(1), -Fraction(x1), Fraction(0))
        raise ParameterError(f"orientation must be +1 or -1, got {z}")

    @property
    def is_degenerate(self) -> bool:
        return self.a == 0 and self.b == 0 and self.c == 0

    def evaluate(self, x: int, y: int) -> int:
        return int(self.c * y >= self.a * x + self.b)

    def evaluate_points(self, points: np.ndarray) -> np.ndarray:
        scale = math.lcm(self.a.denominator, self.b.denominator, self.c.denominator)
        cy = int(self.c * scale)
        cx = int(self.a * scale)
        c0 = int(self.b * scale)
        return _affine_nonnegative(points, cy, cx, c0).astype(np.uint8)

    def to_dict(self) -> dict[str, Any]:
        return {
            "type": "general_halfplane",
            "a": [self.a.numerator, self.a.denominator],
            "b": [self.b.numerator, self.b.denominator],
            "c": [self.c.numerator, self.c.denominator],
        }


def _constant_halfplane(value: int, grid: GridSpec) -> Halfplane:
    # y ≥ -1 holds everywhere on the grid, y ≥ d + 1 nowhere.
    return Halfplane.from_decoded(0, -1 if value else grid.d + 1, 1, grid.d)


def _canonicalize_vertical(h: GeneralHalfplane, grid: GridSpec) -> Halfplane:
    """Rewrite 0 ≥ a·x + b as a steep line of slope ±2d separating two columns."""
    d = grid.d
    if h.a == 0:
        return _constant_halfplane(int(h.b <= 0), grid)

    threshold = -h.b / h.a
    if h.a > 0:
        # x ≤ threshold
        x1 = math.floor(threshold)
        if x1 < 0:
            return _constant_halfplane(0, grid)
        if x1 >= d:
            return _constant_halfplane(1, grid)
        return Halfplane.from_decoded(2 * d, -2 * d * x1, 1, d)

    # x ≥ threshold
    x1 = math.ceil(threshold)
    if x1 <= 0:
        return _constant_halfplane(1, grid)
    if x1 > d:
        return _constant_halfplane(0, grid)
    return Halfplane.from_decoded(-2 * d, 2 * d * x1, 1, d)


def _canonicalize_by_search(h: GeneralHalfplane, grid: GridSpec) -> Halfplane:
    """Find a bounded (a, b) reproducing the column-by-column labelling of ``h``.

    Each column fixes the row where the labels switch, which constrains a·x + b to
    a unit interval. The constraints cut a convex polygon out of the dual box; its
    vertex average satisfies every constraint strictly.
    """
    d = grid.d
    z = 1 if h.c > 0 else -1
    polygon = box_polygon(grid.box_half_width)

    for x in range(d + 1):
        t = (h.a * x + h.b) / h.c
        if z == 1:
            # rows y ≥ m are labelled 1
            m = min(max(math.ceil(t), 0), d + 1)
            if m <= d:
                polygon = clip_polygon(polygon, x, 1, m)
            if m >= 1:
                polygon = clip_polygon(polygon, -x, -1, -(m - 1))
        else:
            # rows y ≤ m are labelled 1
            m = min(max(math.floor(t), -1), d)
            if m >= 0:
                polygon = clip_polygon(polygon, -x, -1, -m)
            if m <= d - 1:
                polygon = clip_polygon(polygon, x, 1, m + 1)
        if len(polygon) < 3:
            break

    if len(polygon) < 3 or polygon_area(polygon) <= 0:
        raise GeometryError(f"no bounded halfplane reproduces {h} on the grid of size {d}")
    a, b = vertex_average(polygon)
    return Halfplane.from_decoded(a, b, z, d)


def canonicalize_halfplane(h: GeneralHalfplane, grid: GridSpec) -> Halfplane:
    """Return a member of HALFPLANE_d that labels every grid point like ``h``.

    Args:
        h: Any halfplane c·y ≥ a·x + b
        grid: The grid X_d²

    Returns:
        An equivalent bounded halfplane

    Raises:
        ParameterError: If a = b = c = 0
    """
    if h.is_degenerate:
        raise ParameterError("degenerate halfplane: a = b = c = 0")
    if h.c == 0:
        return _canonicalize_vertical(h, grid)

    half = grid.box_half_width
    z = 1 if h.c > 0 else -1
    a = h.a / h.c
    b = h.b / h.c
    if -half <= a <= half and -half <= b <= half and not (z == -1 and a == -half):
        return Halfplane.from_decoded(a, b, z, grid.d)
    return _canonicalize_by_search(h, grid)

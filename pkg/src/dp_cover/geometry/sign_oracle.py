"""Brute-force face enumeration by probing around every arrangement vertex.

This does not share code with the half-edge construction: it finds every crossing
of the lines (sample lines and box edges), looks at the wedges between consecutive
lines through that crossing, and steps a short exact distance into each wedge.
"""

from __future__ import annotations

from fractions import Fraction

from ..concepts.base import GridSpec, LabeledSample
from ..errors import OracleError

MAX_ORACLE_LINES = 12

Witness = tuple[Fraction, Fraction]


def _line_value(line: tuple[int, int, int], a: Fraction, b: Fraction) -> Fraction:
    alpha, beta, gamma = line
    return alpha * a + beta * b - gamma


def face_sign_oracle(
    sample: LabeledSample,
    grid: GridSpec | None = None,
    max_lines: int = MAX_ORACLE_LINES,
) -> list[tuple[tuple[bool, ...], Witness]]:
    """Enumerate the realisable strict sign vectors of the dual lines inside the box.

    Args:
        sample: Grid sample (duplicate points give one line)
        grid: Grid specification
        max_lines: Refuse instances with more distinct lines than this

    Returns:
        One (sign vector, witness point) per face; sign i is True when the witness
        lies on the positive side x_i·a + b − y_i > 0 of the i-th distinct point,
        points sorted by (x, y)
    """
    grid = grid or sample.grid
    half = grid.box_half_width
    points = sorted({(int(x), int(y)) for x, y in sample.points.tolist()})
    if len(points) > max_lines:
        raise OracleError(f"{len(points)} lines exceed the oracle limit of {max_lines}")

    sample_lines = [(x, 1, y) for x, y in points]
    box_lines = [(1, 0, -half), (1, 0, half), (0, 1, -half), (0, 1, half)]
    every_line = sample_lines + box_lines

    crossings: set[Witness] = set()
    for i, (a1, b1, c1) in enumerate(every_line):
        for a2, b2, c2 in every_line[i + 1 :]:
            det = a1 * b2 - a2 * b1
            if det == 0:
                continue
            a = Fraction(c1 * b2 - c2 * b1, det)
            b = Fraction(a1 * c2 - a2 * c1, det)
            if -half <= a <= half and -half <= b <= half:
                crossings.add((a, b))

    found: dict[tuple[bool, ...], Witness] = {}
    for a0, b0 in sorted(crossings):
        through = [line for line in every_line if _line_value(line, a0, b0) == 0]
        rays: list[tuple[int, int]] = []
        for alpha, beta, _ in through:
            rays.extend([(beta, -alpha), (-beta, alpha)])
        rays.sort(key=_ray_angle_key)

        for index, r1 in enumerate(rays):
            r2 = rays[(index + 1) % len(rays)]
            turn = r1[0] * r2[1] - r1[1] * r2[0]
            if turn > 0:
                step = (r1[0] + r2[0], r1[1] + r2[1])
            elif turn == 0 and r1[0] * r2[0] + r1[1] * r2[1] < 0:
                step = (-r1[1], r1[0])
            else:
                continue

            # Stay closer to the crossing than any line not passing through it.
            t = Fraction(1)
            for line in every_line:
                value = _line_value(line, a0, b0)
                if value == 0:
                    continue
                rate = line[0] * step[0] + line[1] * step[1]
                if rate != 0:
                    t = min(t, abs(value) / abs(rate) / 2)

            a = a0 + t * step[0]
            b = b0 + t * step[1]
            if not (-half < a < half and -half < b < half):
                continue
            signs = tuple(_line_value(line, a, b) > 0 for line in sample_lines)
            found.setdefault(signs, (a, b))

    return sorted(found.items())


def _ray_angle_key(ray: tuple[int, int]) -> tuple[int, Fraction]:
    """Sort key increasing with the counterclockwise angle from the positive a-axis."""
    dx, dy = ray
    if dy == 0:
        return (0, Fraction(0)) if dx > 0 else (2, Fraction(0))
    # Within the upper or lower half the cotangent dx/dy decreases with the angle.
    half = 1 if dy > 0 else 3
    return (half, -Fraction(dx, dy))

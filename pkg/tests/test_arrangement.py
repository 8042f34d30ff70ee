"""Tests for the exact dual arrangement, face sampling and the sign oracle."""

import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dp_cover.concepts import GridSpec, Halfplane, LabeledSample
from dp_cover.errors import GeometryError, KindMismatchError, OracleError, ParameterError
from dp_cover.geometry import (
    Arrangement,
    Face,
    arrangement_to_dict,
    build_arrangement,
    dual_lines,
    face_sign_oracle,
    line_crossings,
    min_face_area_bound,
    min_vertex_separation,
    pack_mask_words,
    polygon_area,
    popcount,
    uniform_point_in_face,
    vertex_average,
    vertex_separation_bound,
)
from dp_cover.privacy import make_rng


def _sample(points, d):
    return LabeledSample.grid_sample(points, [0] * len(points), d)


def _random_sample(rng, n, d):
    points = rng.integers(0, d + 1, size=(n, 2))
    labels = rng.integers(0, 2, size=n)
    return LabeledSample.grid_sample(points, labels, d)


grid_points = st.lists(st.tuples(st.integers(0, 8), st.integers(0, 8)), max_size=9)


class TestBuildArrangement:
    """Tests for face enumeration."""

    def test_empty_sample_is_the_box(self):
        arr = build_arrangement(_sample([], 4))
        assert len(arr.faces) == 1
        assert arr.faces[0].area == 16 * 4**4
        assert arr.faces[0].below_mask == 0

    def test_two_crossing_lines(self):
        arr = build_arrangement(_sample([(1, 2), (3, 1)], 4))
        assert len(arr.faces) == 4
        assert sum(f.area for f in arr.faces) == arr.box_area
        assert {f.below_mask for f in arr.faces} == {0, 1, 2, 3}

    def test_three_lines_general_position(self):
        arr = build_arrangement(_sample([(1, 2), (3, 1), (2, 4)], 4))
        assert len(arr.faces) == 7
        assert sum(f.area for f in arr.faces) == arr.box_area

    def test_concurrent_lines(self):
        """Collinear points give three dual lines through one vertex."""
        arr = build_arrangement(_sample([(0, 0), (1, 1), (2, 2)], 4))
        assert len(arr.faces) == 6
        assert len(arr.vertices) == 11
        assert sum(f.area for f in arr.faces) == arr.box_area

    def test_duplicate_points_share_a_line(self):
        sample = _sample([(2, 3), (2, 3), (1, 1)], 4)
        lines = dual_lines(sample)
        assert [(line.x_coeff, line.y_coeff) for line in lines] == [(1, 1), (2, 3)]
        assert lines[1].source_indices == (0, 1)
        arr = build_arrangement(sample)
        for face in arr.faces:
            assert bool(face.below_mask & 1) == bool(face.below_mask & 2)

    def test_horizontal_dual_line(self):
        arr = build_arrangement(_sample([(0, 3)], 4))
        assert len(arr.faces) == 2

    def test_bool_sample_rejected(self):
        with pytest.raises(KindMismatchError):
            build_arrangement(LabeledSample.bool_sample([[0, 1]], [1], 2))

    @given(grid_points)
    @settings(max_examples=40, deadline=None)
    def test_partition_invariants(self, points):
        arr = build_arrangement(_sample(points, 8))
        assert sum(f.area for f in arr.faces) == arr.box_area
        assert all(f.area > 0 for f in arr.faces)
        assert len(arr.faces) <= arr.face_count_bound()
        if len(arr.lines) >= 2:
            assert len(arr.faces) <= len(arr.lines) ** 2

    @pytest.mark.parametrize("d", [8, 64, 1024])
    def test_area_conservation_across_scales(self, d):
        rng = make_rng(d)
        for _ in range(5):
            arr = build_arrangement(_random_sample(rng, 12, d))
            assert sum(f.area for f in arr.faces) == 16 * d**4

    @pytest.mark.slow
    @pytest.mark.parametrize("d", [8, 64, 1024])
    def test_area_conservation_many(self, d):
        rng = make_rng(d + 1)
        for _ in range(70):
            n = int(rng.integers(0, 21))
            arr = build_arrangement(_random_sample(rng, n, d))
            assert sum(f.area for f in arr.faces) == 16 * d**4

    def test_faces_are_counterclockwise_with_interior_representative(self):
        arr = build_arrangement(_random_sample(make_rng(3), 8, 8))
        for face in arr.faces:
            a, b = face.representative
            assert all(line.side(a, b) != 0 for line in arr.lines)
            assert len(face.vertices) >= 3

    def test_mask_words_match_masks(self):
        arr = build_arrangement(_random_sample(make_rng(4), 70, 4))
        words = arr.mask_words()
        assert words.shape == (len(arr.faces), 2)
        assert words.dtype == np.uint64
        for row, face in zip(words, arr.faces, strict=True):
            assert int(row[0]) | (int(row[1]) << 64) == face.below_mask

    def test_all_words_and_popcount(self):
        arr = build_arrangement(_random_sample(make_rng(5), 70, 4))
        assert popcount(arr.all_words()) == 70
        counts = popcount(arr.mask_words())
        assert counts.tolist() == [face.below_mask.bit_count() for face in arr.faces]

    def test_pack_mask_words(self):
        flags = np.zeros(65, dtype=bool)
        flags[[0, 3, 64]] = True
        assert pack_mask_words(flags, 2).tolist() == [9, 1]
        with pytest.raises(ParameterError):
            pack_mask_words(flags, 1)

    def test_to_dict(self):
        arr = build_arrangement(_sample([(1, 2)], 2))
        data = arrangement_to_dict(arr)
        assert data["d"] == 2
        assert data["box"] == [-8, 8]
        assert data["lines"] == [{"x": 1, "y": 2, "examples": [0]}]
        assert sorted(face["mask"] for face in data["faces"]) == ["0x0", "0x1"]
        assert all(face["area"][1] >= 1 for face in data["faces"])


class TestMaskConstancy:
    """The classification of the sample is the same everywhere inside a face."""

    def test_both_orientations(self):
        rng = make_rng(9)
        sample = _random_sample(rng, 9, 8)
        arr = build_arrangement(sample)
        for face in arr.faces:
            below = np.array([(face.below_mask >> i) & 1 for i in range(len(sample))])
            for _ in range(5):
                a, b = uniform_point_in_face(face, rng)
                up = Halfplane.from_decoded(a, b, 1, 8).evaluate_points(sample.points)
                down = Halfplane.from_decoded(a, b, -1, 8).evaluate_points(sample.points)
                assert np.array_equal(up, 1 - below)
                assert np.array_equal(down, below)


class TestBounds:
    """Tests for the area and separation lower bounds."""

    @pytest.mark.parametrize("seed", range(5))
    def test_face_area_lower_bound(self, seed):
        arr = build_arrangement(_random_sample(make_rng(seed), 12, 8))
        assert min(f.area for f in arr.faces) >= min_face_area_bound(8)

    @pytest.mark.parametrize("seed", range(5))
    def test_vertex_separation(self, seed):
        arr = build_arrangement(_random_sample(make_rng(seed), 10, 16))
        assert min_vertex_separation(arr) >= vertex_separation_bound(16) ** 2

    def test_separation_needs_two_vertices(self):
        arr = Arrangement(GridSpec(2), lines=(), faces=(), vertices=())
        assert min_vertex_separation(arr) == math.inf

    def test_box_vertices_are_not_counted(self):
        assert min_vertex_separation(build_arrangement(_sample([], 2))) == math.inf
        one_line = build_arrangement(_sample([(1, 2)], 2))
        assert len(one_line.vertices) > 2
        assert min_vertex_separation(one_line) == math.inf

    def test_concurrent_lines_cross_once(self):
        """b = 0, b = -a and b = -2a all pass through the origin."""
        arr = build_arrangement(_sample([(0, 0), (1, 0), (2, 0)], 2))
        assert len(arr.vertices) == 9
        assert line_crossings(arr) == [(Fraction(0), Fraction(0))]
        assert min_vertex_separation(arr) == math.inf

    def test_separation_between_line_crossings(self):
        """b = 1 meets b = -a at (-1, 1) and b = -2a at (-1/2, 1)."""
        arr = build_arrangement(_sample([(1, 0), (2, 0), (0, 1)], 2))
        assert sorted(line_crossings(arr)) == [
            (Fraction(-1), Fraction(1)),
            (Fraction(-1, 2), Fraction(1)),
            (Fraction(0), Fraction(0)),
        ]
        assert min_vertex_separation(arr) == Fraction(1, 4)

    def test_bounds(self):
        assert min_face_area_bound(2) == Fraction(1, 64)
        assert vertex_separation_bound(4) == Fraction(1, 16)


class TestUniformPointInFace:
    """Tests for face sampling."""

    def _face(self, vertices):
        vertices = tuple((Fraction(a), Fraction(b)) for a, b in vertices)
        return Face(vertices, polygon_area(vertices), vertex_average(vertices), 0)

    def test_unit_square_centroid(self):
        face = self._face([(0, 0), (1, 0), (1, 1), (0, 1)])
        rng = make_rng(0)
        points = [uniform_point_in_face(face, rng) for _ in range(20_000)]
        mean_a = float(sum(p[0] for p in points)) / len(points)
        mean_b = float(sum(p[1] for p in points)) / len(points)
        assert abs(mean_a - 0.5) < 0.01
        assert abs(mean_b - 0.5) < 0.01

    def test_triangle_median_split(self):
        face = self._face([(0, 0), (2, 0), (0, 2)])
        rng = make_rng(1)
        draws = [uniform_point_in_face(face, rng) for _ in range(20_000)]
        share = sum(1 for a, b in draws if a < b) / len(draws)
        assert abs(share - 0.5) < 0.02

    @pytest.mark.slow
    def test_triangle_median_split_precise(self):
        face = self._face([(0, 0), (2, 0), (0, 2)])
        rng = make_rng(2)
        draws = [uniform_point_in_face(face, rng) for _ in range(100_000)]
        share = sum(1 for a, b in draws if a < b) / len(draws)
        assert abs(share - 0.5) < 0.01

    def test_points_strictly_interior(self):
        rng = make_rng(5)
        arr = build_arrangement(_random_sample(rng, 6, 8))
        for face in arr.faces:
            for _ in range(30):
                a, b = uniform_point_in_face(face, rng)
                assert all(line.side(a, b) != 0 for line in arr.lines)
                assert -128 < a < 128 and -128 < b < 128

    def test_degenerate_face(self):
        origin = (Fraction(0), Fraction(0))
        face = Face((origin, (Fraction(1), Fraction(0))), Fraction(0), origin, 0)
        with pytest.raises(GeometryError):
            uniform_point_in_face(face, make_rng(0))


class TestFaceSignOracle:
    """Cross-checks between the half-edge construction and vertex probing."""

    def test_single_line(self):
        assert len(face_sign_oracle(_sample([(2, 1)], 4))) == 2

    def test_empty_sample(self):
        assert [signs for signs, _ in face_sign_oracle(_sample([], 4))] == [()]

    def test_concurrent_lines(self):
        sample = _sample([(0, 0), (1, 1), (2, 2)], 4)
        signs = {s for s, _ in face_sign_oracle(sample)}
        assert len(signs) == 6
        assert signs == build_arrangement(sample).sign_vectors()

    def test_witnesses_realise_signs(self):
        sample = _random_sample(make_rng(8), 6, 8)
        lines = dual_lines(sample)
        for signs, (a, b) in face_sign_oracle(sample):
            assert signs == tuple(line.side(a, b) > 0 for line in lines)

    def test_random_instances_agree(self):
        rng = make_rng(21)
        for _ in range(25):
            sample = _random_sample(rng, 8, 8)
            arr = build_arrangement(sample)
            oracle = face_sign_oracle(sample)
            assert len(oracle) == len(arr.faces)
            assert {s for s, _ in oracle} == arr.sign_vectors()

    def test_refuses_large_instances(self):
        points = [(x, y) for x in range(4) for y in range(4)]
        with pytest.raises(OracleError):
            face_sign_oracle(_sample(points, 4))

    def test_grid_defaults_to_sample(self):
        sample = _sample([(1, 1)], 3)
        assert face_sign_oracle(sample) == face_sign_oracle(sample, GridSpec(3))

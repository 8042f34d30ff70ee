"""Tests for the quality function and the three private selectors."""

import math
from collections import Counter

import numpy as np
import pytest

from dp_cover.concepts import Halfplane, LabeledSample, Literal, Triangle, evaluate_sample
from dp_cover.errors import KindMismatchError, ParameterError, ResourceCapError
from dp_cover.geometry import build_arrangement
from dp_cover.harness import chisquare_pvalue
from dp_cover.privacy import exact_selection_pmf, make_rng
from dp_cover.selectors import (
    GeometricQuality,
    HalfplaneSelector,
    LiteralSelector,
    Mode,
    TriangleSelector,
    draw_candidate_triple,
    halfplane_selection_pmf,
    halfplane_utility_slack,
    literal_candidates,
    literal_quality_table,
    noisy_threshold,
    quality_score,
    select_halfplane,
    select_literal,
    select_triangle,
    threshold_offset,
    threshold_value,
    triangle_scores,
    triangle_selection_pmf,
)
from dp_cover.selectors.halfplane import candidate_scores


def _bool(vectors, labels):
    return LabeledSample.bool_sample(vectors, labels, len(vectors[0]))


def _candidate_halfplane(arr, candidate):
    a, b = arr.faces[candidate // 2].representative
    return Halfplane.from_decoded(a, b, 1 if candidate % 2 == 0 else -1, arr.grid.d)


def _candidate_of(arr, sample, h):
    """Map a drawn halfplane back to its (face, orientation) candidate."""
    a, b, z = h.decode()
    mask = sum(1 << i for i, (x, y) in enumerate(sample.points.tolist()) if y < a * x + b)
    face = next(i for i, f in enumerate(arr.faces) if f.below_mask == mask)
    return 2 * face + (0 if z == 1 else 1)


class TestQualityScore:
    """Tests for the count-based score."""

    def test_all_ones_predicate(self):
        sample = _bool([[1], [1], [1]], [0, 1, 0])
        gq = GeometricQuality(Mode.AND, b_j=3.0, k=2, sample=sample)
        assert quality_score(Literal(0), gq) == min(-1.5, 0.0)

    def test_first_term_clipped_by_zero(self):
        """Ten negatives, b = 10, k = 2: zeroing six gives min(6 - 5, -0)."""
        vectors = [[0]] * 6 + [[1]] * 4 + [[1]] * 2
        sample = _bool(vectors, [0] * 10 + [1] * 2)
        gq = GeometricQuality(Mode.AND, b_j=10.0, k=2, sample=sample)
        assert quality_score(Literal(0), gq) == 0.0

    def test_zeroed_positive_dominates(self):
        vectors = [[0]] * 6 + [[1]] * 4 + [[0]] + [[1]]
        sample = _bool(vectors, [0] * 10 + [1] * 2)
        gq = GeometricQuality(Mode.AND, b_j=10.0, k=2, sample=sample)
        assert quality_score(Literal(0), gq) == -1.0

    def test_or_mode_covers_positives(self):
        sample = _bool([[1], [1], [0], [1]], [1, 1, 0, 0])
        gq = GeometricQuality(Mode.OR, b_j=0.0, k=1, sample=sample)
        # v0 labels 1 two positives and one negative
        assert quality_score(Literal(0), gq) == -1.0
        assert quality_score(Literal(0, negated=True), gq) == min(0.0, -1.0)

    def test_empty_sample(self):
        gq = GeometricQuality(Mode.AND, b_j=4.0, k=2, sample=_bool([[0]], [0]).subset([]))
        assert quality_score(Literal(0), gq) == -2.0

    def test_to_dict(self):
        gq = GeometricQuality("or", b_j=1.5, k=3, sample=_bool([[0]], [1]))
        assert gq.mode is Mode.OR
        assert gq.to_dict() == {"mode": "or", "b_j": 1.5, "k": 3, "remaining": 1}


class TestNoisyThreshold:
    """Tests for the noisy threshold b_j."""

    def test_hand_substitution(self):
        expected = 100 - 4 * math.log(4) * math.log(40 * math.log(4))
        assert threshold_value(100, 0, 2, 0.5, 0.1, 1.0) == pytest.approx(expected)

    def test_vanishing_offset(self):
        assert threshold_offset(2, 0.5, 0.1, 1e12) == pytest.approx(0.0, abs=1e-9)

    def test_large_epsilon_noise(self, rng):
        sample = _bool([[0]] * 7 + [[1]] * 3, [0] * 7 + [1] * 3)
        for _ in range(50):
            b = noisy_threshold(sample, 2, 0.5, 0.1, 1e9, rng)
            assert b.noise in (-1, 0)
            assert b.value == pytest.approx(7 + b.noise, abs=1e-6)

    def test_or_mode_counts_positives(self, rng):
        sample = _bool([[0]] * 7 + [[1]] * 3, [0] * 7 + [1] * 3)
        b = noisy_threshold(sample, 2, 0.5, 0.1, 1e9, rng, mode=Mode.OR)
        assert b.value == pytest.approx(3 + b.noise, abs=1e-6)

    def test_nonpositive_noise_keeps_threshold_below_count(self, rng):
        sample = _bool([[0]] * 5, [0] * 5)
        for _ in range(50):
            b = noisy_threshold(sample, 1, 0.5, 0.1, 1.0, rng)
            if b.noise <= 0:
                assert b.value <= 5


class TestLiteralSelection:
    """Tests for the exponential mechanism over literals."""

    def test_candidate_order(self):
        assert literal_candidates(2) == (Literal(0), Literal(0, True), Literal(1), Literal(1, True))
        assert literal_candidates(1, Mode.OR) == (Literal(0, True), Literal(0))

    def test_no_variables(self):
        with pytest.raises(ParameterError):
            literal_candidates(0)

    def test_empty_literal_set(self):
        gq = GeometricQuality(Mode.AND, 0.0, 1, _bool([[0]], [0]))
        with pytest.raises(ParameterError):
            literal_quality_table(gq, [])

    def test_grid_sample_rejected(self, triangle_sample):
        gq = GeometricQuality(Mode.AND, 0.0, 1, triangle_sample)
        with pytest.raises(KindMismatchError):
            literal_quality_table(gq, literal_candidates(2))

    def test_table_matches_pointwise(self):
        sample = _bool([[1, 0, 1], [0, 0, 1], [1, 1, 0], [0, 1, 1]], [1, 0, 0, 1])
        gq = GeometricQuality(Mode.AND, 1.5, 2, sample)
        literals = literal_candidates(3)
        table = literal_quality_table(gq, literals)
        assert table.scores.tolist() == [quality_score(lit, gq) for lit in literals]

    def test_equal_scores_uniform(self):
        sample = _bool([[0, 0]], [1]).subset([])
        gq = GeometricQuality(Mode.AND, 1.0, 1, sample)
        table = literal_quality_table(gq, literal_candidates(2))
        assert np.allclose(exact_selection_pmf(table, 1.0), 0.25)

    def test_huge_epsilon_picks_argmax(self, rng):
        sample = _bool([[1, 0], [1, 1], [0, 0], [0, 1]], [1, 1, 0, 0])
        gq = GeometricQuality(Mode.AND, 0.0, 1, sample)
        picks = {select_literal(gq, literal_candidates(2), 1e6, rng) for _ in range(100)}
        assert picks == {Literal(0)}

    def test_three_variable_chisquare(self):
        sample = _bool(
            [[1, 0, 1], [0, 0, 1], [1, 1, 0], [0, 1, 1], [1, 1, 1]], [1, 0, 0, 1, 1]
        )
        gq = GeometricQuality(Mode.AND, 1.0, 1, sample)
        selector = LiteralSelector(3)
        rng = make_rng(17)
        draws = Counter(selector.select(gq, 2.0, rng) for _ in range(20_000))
        table = literal_quality_table(gq, selector.candidates)
        counts = [draws[lit] for lit in selector.candidates]
        assert chisquare_pvalue(counts, exact_selection_pmf(table, 2.0)) > 1e-3


class TestSelectHalfplane:
    """Tests for face-weighted halfplane selection."""

    def test_scores_match_pointwise(self):
        sample = LabeledSample.grid_sample([(1, 2), (3, 1), (2, 4), (0, 3)], [0, 1, 0, 1], 4)
        arr = build_arrangement(sample)
        for mode in Mode:
            gq = GeometricQuality(mode, 1.0, 2, sample)
            scores = candidate_scores(arr, gq)
            expected = [
                quality_score(_candidate_halfplane(arr, c), gq) for c in range(2 * len(arr.faces))
            ]
            assert scores.tolist() == expected

    def test_scores_match_pointwise_across_words(self):
        rng = make_rng(17)
        points = rng.integers(0, 3, size=(150, 2))
        sample = LabeledSample.grid_sample(points, rng.integers(0, 2, size=150), 2)
        arr = build_arrangement(sample)
        assert arr.word_count == 3
        for mode in Mode:
            gq = GeometricQuality(mode, 40.0, 3, sample)
            expected = [
                quality_score(_candidate_halfplane(arr, c), gq) for c in range(2 * len(arr.faces))
            ]
            assert candidate_scores(arr, gq).tolist() == expected

    def test_mirror_faces_equally_likely(self):
        """Both dual lines pass through the origin, so (a,b,z) and (-a,-b,-z) tie."""
        sample = LabeledSample.grid_sample([(1, 0), (3, 0)], [1, 1], 4)
        arr = build_arrangement(sample)
        gq = GeometricQuality(Mode.AND, 1.0, 1, sample)
        pmf = halfplane_selection_pmf(arr, gq, 1.0)
        for i, face in enumerate(arr.faces):
            a, b = face.representative
            j = next(j for j, f in enumerate(arr.faces) if f.representative == (-a, -b))
            assert pmf[2 * i] == pytest.approx(pmf[2 * j + 1])
        assert pmf[0::2].sum() == pytest.approx(0.5)

        rng = make_rng(3)
        ups = sum(select_halfplane(gq, 1.0, rng, arr).z == 1 for _ in range(10_000))
        assert abs(ups / 10_000 - 0.5) < 0.02

    def test_high_epsilon_zeroes_the_negative(self, rng):
        sample = LabeledSample.grid_sample([(4, 4)], [0], 8)
        gq = GeometricQuality(Mode.AND, 1.0, 1, sample)
        arr = build_arrangement(sample)
        zeroed = sum(select_halfplane(gq, 100.0, rng, arr).evaluate(4, 4) == 0 for _ in range(200))
        assert zeroed >= 198

    def test_face_marginal_chisquare(self):
        sample = LabeledSample.grid_sample(
            [(1, 2), (3, 1), (2, 4), (0, 3), (4, 4)], [0, 1, 0, 1, 0], 4
        )
        arr = build_arrangement(sample)
        gq = GeometricQuality(Mode.AND, 1.0, 1, sample)
        pmf = halfplane_selection_pmf(arr, gq, 0.5)
        assert pmf.sum() == pytest.approx(1.0)
        rng = make_rng(29)
        counts = np.zeros(len(pmf))
        for _ in range(5_000):
            counts[_candidate_of(arr, sample, select_halfplane(gq, 0.5, rng, arr))] += 1
        assert chisquare_pvalue(counts, pmf) > 1e-3

    def test_every_candidate_reachable(self, triangle_sample):
        arr = build_arrangement(triangle_sample)
        gq = GeometricQuality(Mode.OR, 6.0, 3, triangle_sample)
        assert (halfplane_selection_pmf(arr, gq, 1.0) > 0).all()

    def test_empty_sample_uniform_over_box(self, rng):
        sample = LabeledSample.grid_sample([], [], 4)
        gq = GeometricQuality(Mode.AND, 1.0, 1, sample)
        h = select_halfplane(gq, 1.0, rng)
        a, b, _ = h.decode()
        assert -32 < a < 32 and -32 < b < 32

    def test_utility(self):
        d, epsilon, beta = 16, 1.0, 0.1
        rng = make_rng(31)
        runs = misses = 0
        for _ in range(20):
            points = rng.integers(0, d + 1, size=(8, 2))
            sample = LabeledSample.grid_sample(points, rng.integers(0, 2, size=8), d)
            gq = GeometricQuality(Mode.AND, 2.0, 1, sample)
            arr = build_arrangement(sample)
            floor = candidate_scores(arr, gq).max() - halfplane_utility_slack(epsilon, d, beta)
            for _ in range(50):
                runs += 1
                misses += quality_score(select_halfplane(gq, epsilon, rng, arr), gq) < floor
        assert runs == 1000
        assert misses <= beta * runs

    def test_kind_and_size_checks(self, rng, triangle_sample):
        gq = GeometricQuality(Mode.AND, 1.0, 1, _bool([[0]], [0]))
        with pytest.raises(KindMismatchError):
            select_halfplane(gq, 1.0, rng)
        other = build_arrangement(triangle_sample.subset([0, 1]))
        with pytest.raises(ParameterError):
            select_halfplane(GeometricQuality(Mode.AND, 1.0, 1, triangle_sample), 1.0, rng, other)

    def test_selector_uses_the_full_step_budget(self):
        sample = LabeledSample.grid_sample([(2, 2)], [0], 4)
        gq = GeometricQuality(Mode.AND, 1.0, 1, sample)
        a = HalfplaneSelector().select(gq, 4.0, make_rng(0))
        b = select_halfplane(gq, 4.0, make_rng(0))
        assert a == b

    def test_utility_slack_rejects_beta(self):
        with pytest.raises(ParameterError):
            halfplane_utility_slack(1.0, 8, 0.0)


class TestSelectTriangle:
    """Tests for ordered-triple triangle selection."""

    def test_empty_sample(self, rng):
        sample = LabeledSample.grid_sample([], [], 4)
        gq = GeometricQuality(Mode.OR, 1.0, 1, sample)
        triangle = select_triangle(gq, 1.0, rng)
        assert isinstance(triangle, Triangle)
        for h in triangle.halfplanes:
            _, b, _ = h.decode()
            assert -32 < b < 32

    def test_mask_scores_match_pointwise(self):
        sample = LabeledSample.grid_sample([(1, 2), (3, 1), (2, 4)], [1, 0, 1], 4)
        arr = build_arrangement(sample)
        gq = GeometricQuality(Mode.OR, 1.0, 1, sample)
        count = 2 * len(arr.faces)
        halfplanes = [_candidate_halfplane(arr, c) for c in range(count)]
        for first in range(count):
            scores = triangle_scores(arr, gq, first)
            for second in range(count):
                for third in range(count):
                    tri = Triangle((halfplanes[first], halfplanes[second], halfplanes[third]))
                    assert scores[second, third] == quality_score(tri, gq)

    def test_mask_scores_match_pointwise_across_words(self):
        rng = make_rng(19)
        points = rng.integers(0, 2, size=(100, 2))
        sample = LabeledSample.grid_sample(points, rng.integers(0, 2, size=100), 1)
        arr = build_arrangement(sample)
        assert arr.word_count == 2
        count = 2 * len(arr.faces)
        halfplanes = [_candidate_halfplane(arr, c) for c in range(count)]
        for mode in Mode:
            gq = GeometricQuality(mode, 30.0, 2, sample)
            for first in range(0, count, 5):
                scores = triangle_scores(arr, gq, first)
                for second in range(count):
                    for third in range(count):
                        tri = Triangle((halfplanes[first], halfplanes[second], halfplanes[third]))
                        assert scores[second, third] == quality_score(tri, gq)

    def test_constant_score_factorises(self):
        """With b/k dominating every score, triple weights are area products."""
        sample = LabeledSample.grid_sample([(1, 2), (3, 1), (2, 4)], [1, 1, 1], 4)
        arr = build_arrangement(sample)
        gq = GeometricQuality(Mode.AND, 1000.0, 1, sample)
        pmf = triangle_selection_pmf(arr, gq, 1.0)
        areas = np.repeat([float(f.area) for f in arr.faces], 2)
        single = areas / areas.sum()
        expected = single[:, None, None] * single[None, :, None] * single[None, None, :]
        assert np.allclose(pmf, expected)

        rng = make_rng(41)
        firsts = Counter(draw_candidate_triple(arr, gq, 1.0, rng)[0] for _ in range(3_000))
        counts = [firsts[c] for c in range(len(single))]
        assert chisquare_pvalue(counts, single) > 1e-3

    def test_high_epsilon_separates_hand_instance(self, triangle_sample):
        gq = GeometricQuality(Mode.OR, 6.0, 1, triangle_sample)
        arr = build_arrangement(triangle_sample)
        rng = make_rng(43)
        perfect = 0
        for _ in range(40):
            tri = select_triangle(gq, 100.0, rng, arr)
            perfect += np.array_equal(evaluate_sample(tri, triangle_sample), triangle_sample.labels)
        assert perfect >= 38

    def test_cap(self, rng, triangle_sample):
        gq = GeometricQuality(Mode.OR, 1.0, 1, triangle_sample)
        with pytest.raises(ResourceCapError) as info:
            select_triangle(gq, 1.0, rng, triple_cap=1000)
        assert info.value.cap == 1000
        assert "reduce" in str(info.value)

    def test_selector_rejects_bad_cap(self):
        with pytest.raises(ParameterError):
            TriangleSelector(triple_cap=0)

    def test_pmf_shape_and_normalisation(self):
        sample = LabeledSample.grid_sample([(2, 2)], [1], 4)
        arr = build_arrangement(sample)
        gq = GeometricQuality(Mode.OR, 1.0, 1, sample)
        pmf = triangle_selection_pmf(arr, gq, 2.0)
        assert pmf.shape == (4, 4, 4)
        assert pmf.sum() == pytest.approx(1.0)

"""Tests for the private greedy set-cover loop."""

import json
import math

import numpy as np
import pytest

from dp_cover.concepts import Halfplane, LabeledSample, Literal, evaluate_sample
from dp_cover.datagen import label_by_target, random_conjunction, sample_boolean
from dp_cover.errors import KindMismatchError, ParameterError
from dp_cover.privacy import PrivacyBudget, make_rng
from dp_cover.selectors import HalfplaneSelector, LiteralSelector, Mode
from dp_cover.setcover import LearnerConfig, RunTrace, empirical_error_bound, run_setcover


def _config(k=1, alpha=0.25, beta=0.1, epsilon=1e6, mode=Mode.AND, selection="literal"):
    budget = PrivacyBudget.derive(epsilon, 1e-6, k, alpha)
    return LearnerConfig(k, alpha, beta, budget, mode=mode, selection=selection)


def _single_literal_sample(rng, n=100, d=4):
    vectors = rng.integers(0, 2, size=(n, d))
    return LabeledSample.bool_sample(vectors, vectors[:, 0], d)


def _conjunction_sample(rng, n=400, d=8):
    vectors = rng.integers(0, 2, size=(n, d))
    labels = vectors[:, 1] & (1 - vectors[:, 3])
    return LabeledSample.bool_sample(vectors, labels, d)


class TestLearnerConfig:
    """Tests for run parameters."""

    def test_iteration_count(self):
        assert _config(k=2, alpha=0.25).iteration_count == 12

    @pytest.mark.parametrize(
        "k, alpha, beta", [(0, 0.25, 0.1), (1, 0.0, 0.1), (1, 0.25, 1.0)]
    )
    def test_rejects(self, k, alpha, beta):
        budget = PrivacyBudget.derive(1.0, 1e-6, 1, 0.25)
        with pytest.raises(ParameterError):
            LearnerConfig(k, alpha, beta, budget)

    def test_to_dict(self):
        data = _config(mode="or").to_dict()
        assert data["mode"] == "or"
        assert data["iterations"] == 6
        assert data["budget"]["rule"] == "set_cover"


class TestRunSetcover:
    """Tests for the fixed-length greedy loop."""

    def test_single_literal_target(self, rng):
        sample = _single_literal_sample(rng)
        cfg = _config()
        h, _ = run_setcover(sample, cfg, LiteralSelector(4), rng)
        mistakes = np.count_nonzero(evaluate_sample(h, sample) != sample.labels)
        assert mistakes / len(sample) <= cfg.alpha

    def test_no_negatives_keeps_positives(self, rng):
        vectors = np.column_stack([np.ones(30, dtype=int), rng.integers(0, 2, size=(30, 3))])
        sample = LabeledSample.bool_sample(vectors, [1] * 30, 4)
        h, trace = run_setcover(sample, _config(), LiteralSelector(4), rng)
        assert evaluate_sample(h, sample).all()
        assert trace.total_deleted == 0

    def test_runs_exactly_iteration_count(self, rng):
        sample = _single_literal_sample(rng, n=10)
        cfg = _config(k=2)
        h, trace = run_setcover(sample, cfg, LiteralSelector(4), rng)
        assert len(trace.records) == cfg.iteration_count == 12
        assert len(h.children) == 12
        assert all(isinstance(lit, Literal) for lit in h.children)

    def test_empty_sample(self, rng):
        sample = LabeledSample.bool_sample(np.zeros((0, 3), dtype=int), [], 3)
        h, trace = run_setcover(sample, _config(), LiteralSelector(3), rng)
        assert len(trace.records) == 6
        assert trace.final_size == 0

    def test_deletion_accounting(self, rng):
        sample = _conjunction_sample(rng, n=120)
        _, trace = run_setcover(sample, _config(k=2, epsilon=2.0), LiteralSelector(8), rng)
        last = trace.records[-1]
        assert trace.total_deleted == len(sample) - trace.final_size
        assert trace.final_size == last.remaining_negatives + last.remaining_positives

    @pytest.mark.parametrize("epsilon", [0.5, 1e6])
    def test_deleted_examples_are_labelled_zero(self, epsilon, rng):
        sample = _conjunction_sample(rng, n=150)
        h, trace = run_setcover(sample, _config(k=2, epsilon=epsilon), LiteralSelector(8), rng)
        assert np.count_nonzero(evaluate_sample(h, sample) == 0) == trace.total_deleted

    def test_or_mode_deletes_ones(self, rng):
        sample = _conjunction_sample(rng, n=150)
        cfg = _config(k=2, mode=Mode.OR)
        h, trace = run_setcover(sample, cfg, LiteralSelector(8, Mode.OR), rng)
        assert h.op.value == "or"
        assert np.count_nonzero(evaluate_sample(h, sample) == 1) == trace.total_deleted

    def test_same_seed_same_run(self):
        sample = _conjunction_sample(make_rng(0), n=100)
        cfg = _config(k=2, epsilon=1.0)
        first, _ = run_setcover(sample, cfg, LiteralSelector(8), make_rng(5))
        second, _ = run_setcover(sample, cfg, LiteralSelector(8), make_rng(5))
        assert first == second

    def test_error_within_bound(self):
        cfg = _config(k=2, alpha=0.25)
        allowed = cfg.alpha * 400 / 2 + 2 * cfg.k * math.log2(2 / cfg.alpha)
        for seed in range(10):
            rng = make_rng(seed)
            sample = _conjunction_sample(rng)
            h, _ = run_setcover(sample, cfg, LiteralSelector(8), rng)
            assert np.count_nonzero(evaluate_sample(h, sample) != sample.labels) <= allowed

    def test_error_within_bound_on_random_conjunctions(self):
        cfg = _config(k=3, alpha=0.1)
        n, d = 500, 16
        allowed = cfg.alpha * n / 2 + 2 * cfg.k * math.log2(2 / cfg.alpha)
        assert empirical_error_bound(cfg, n, 0.0) == pytest.approx(cfg.alpha * n / 2)
        for seed in range(50):
            rng = make_rng(2000 + seed)
            target = random_conjunction(3, d, rng)
            sample = label_by_target(sample_boolean(n, d, rng), target)
            h, _ = run_setcover(sample, cfg, LiteralSelector(d), rng)
            mistakes = np.count_nonzero(evaluate_sample(h, sample) != sample.labels)
            assert mistakes <= allowed
            assert mistakes <= empirical_error_bound(cfg, n, 0.0)

    def test_halfplane_run_keeps_positives(self, triangle_sample, rng):
        cfg = _config(k=3, epsilon=1e4)
        h, _ = run_setcover(triangle_sample, cfg, HalfplaneSelector(), rng)
        assert all(isinstance(p, Halfplane) for p in h.children)
        assert evaluate_sample(h, triangle_sample)[:6].all()

    def test_kind_mismatch(self, triangle_sample, rng):
        with pytest.raises(KindMismatchError):
            run_setcover(triangle_sample, _config(), LiteralSelector(2), rng)

    def test_trace_serialises(self, rng):
        sample = _single_literal_sample(rng, n=20)
        _, trace = run_setcover(sample, _config(), LiteralSelector(4), rng)
        data = json.loads(json.dumps(trace.to_dict()))
        assert data["initial_size"] == 20
        assert len(data["iterations"]) == 6
        assert data["hypothesis"]["type"] == "and"
        assert {"b_j", "w_j", "predicate", "deleted"} <= set(data["iterations"][0])

    def test_empty_trace(self):
        trace = RunTrace(initial_size=3)
        assert trace.final_size == 3
        assert trace.to_dict()["hypothesis"] is None


class TestEmpiricalErrorBound:
    """Tests for the training-error bound."""

    def test_hand_substitution(self):
        cfg = _config(k=2, alpha=0.5, beta=0.1, epsilon=1.0)
        noise = 16 * math.log(4) * math.log(40 * math.log(4))
        assert empirical_error_bound(cfg, 1000) == pytest.approx(max(250.0, noise))
        small = _config(k=2, alpha=0.5, beta=0.1, epsilon=0.1)
        assert empirical_error_bound(small, 1000) == pytest.approx(10 * noise)

    def test_large_epsilon(self):
        assert empirical_error_bound(_config(epsilon=1e12), 200) == pytest.approx(25.0)

    def test_monotone(self):
        cfg = _config(epsilon=0.01)
        assert empirical_error_bound(cfg, 100, 1.0) > empirical_error_bound(cfg, 100, 0.0)
        assert empirical_error_bound(_config(epsilon=0.001), 100) > empirical_error_bound(cfg, 100)

    def test_rejects(self):
        with pytest.raises(ParameterError):
            empirical_error_bound(_config(), -1)
        with pytest.raises(ParameterError):
            empirical_error_bound(_config(), 10, -0.5)

"""Invariant suites behind the ``verify`` command.

Each suite draws random instances from one seed, checks a family of exact or
statistical properties against the brute-force oracles, and returns one
``OracleReport`` per property. ``scale`` multiplies instance and draw counts.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Callable, Iterable
from fractions import Fraction

import numpy as np
from scipy.stats import chisquare

from ..concepts.base import LabeledSample
from ..concepts.expr import Triangle
from ..concepts.halfplane import Halfplane
from ..errors import ParameterError
from ..geometry.arrangement import (
    Arrangement,
    build_arrangement,
    min_face_area_bound,
    min_vertex_separation,
    vertex_separation_bound,
)
from ..geometry.sampling import uniform_point_in_face
from ..geometry.sign_oracle import MAX_ORACLE_LINES, face_sign_oracle
from ..oracles.exhaustive import exhaustive_hypothesis_scores, face_candidates
from ..oracles.privacy import neighbor_ratio_check
from ..oracles.report import Comparison, OracleReport
from ..privacy.budget import PrivacyBudget
from ..privacy.mechanisms import QualityTable, exact_selection_pmf, exp_mech_finite
from ..privacy.rng import make_rng, split_rng
from ..selectors.halfplane import candidate_scores, halfplane_selection_pmf, select_halfplane
from ..selectors.literal import literal_candidates, literal_quality_table
from ..selectors.quality import GeometricQuality, Mode
from ..selectors.triangle import draw_candidate_triple, triangle_scores, triangle_selection_pmf
from ..setcover import LearnerConfig

logger = logging.getLogger(__name__)

PVALUE_FLOOR = 1e-3
SCORE_TOLERANCE = 1e-9
MIN_EXPECTED = 5.0

ARRANGEMENT_DS = (8, 64, 1024)


def _scaled(count: int, scale: float) -> int:
    return max(1, round(count * scale))


def random_grid_sample(rng: np.random.Generator, n: int, d: int) -> LabeledSample:
    points = rng.integers(0, d + 1, size=(n, 2))
    labels = rng.integers(0, 2, size=n)
    return LabeledSample.grid_sample(points, labels, d)


def random_bool_sample(rng: np.random.Generator, n: int, d: int) -> LabeledSample:
    vectors = rng.integers(0, 2, size=(n, d))
    labels = rng.integers(0, 2, size=n)
    return LabeledSample.bool_sample(vectors, labels, d)


def adversarial_samples() -> list[LabeledSample]:
    """Concurrent dual lines (collinear points) and parallel ones (shared x)."""
    return [
        LabeledSample.grid_sample([(0, 0), (1, 1), (2, 2), (3, 3)], [0, 1, 0, 1], 8),
        LabeledSample.grid_sample([(2, 0), (2, 3), (2, 5), (2, 8)], [1, 0, 1, 0], 8),
        LabeledSample.grid_sample([(0, 4), (4, 4), (8, 4), (4, 0), (4, 8)], [0, 0, 1, 1, 0], 8),
        LabeledSample.grid_sample([(1, 2), (3, 6), (0, 0), (0, 5), (0, 8)], [1, 1, 0, 0, 1], 8),
        LabeledSample.grid_sample([(0, 0), (8, 8), (0, 8), (8, 0), (4, 4)], [1, 0, 1, 0, 1], 8),
    ]


def chisquare_pvalue(counts: np.ndarray, probabilities: np.ndarray) -> float:
    """Goodness-of-fit p-value, pooling bins whose expected count is below 5."""
    counts = np.asarray(counts, dtype=np.float64).reshape(-1)
    probabilities = np.asarray(probabilities, dtype=np.float64).reshape(-1)
    total = counts.sum()
    expected = probabilities / probabilities.sum() * total

    keep = expected >= MIN_EXPECTED
    obs = list(counts[keep])
    exp = list(expected[keep])
    pooled_obs = counts[~keep].sum()
    pooled_exp = expected[~keep].sum()
    if pooled_exp > 0:
        if pooled_exp >= MIN_EXPECTED or not exp:
            obs.append(pooled_obs)
            exp.append(pooled_exp)
        else:
            smallest = int(np.argmin(exp))
            obs[smallest] += pooled_obs
            exp[smallest] += pooled_exp
    if len(obs) < 2:
        return 1.0
    f_exp = np.asarray(exp) * (total / np.sum(exp))
    return float(chisquare(np.asarray(obs), f_exp).pvalue)


def _below_mask(arr: Arrangement, a: Fraction, b: Fraction) -> int:
    mask = 0
    for line in arr.lines:
        if line.side(a, b) > 0:
            mask |= line.bits
    return mask


def arrangement_suite(rng: np.random.Generator, scale: float = 1.0) -> list[OracleReport]:
    instances = _scaled(40, scale)
    area_failures = oracle_failures = bound_failures = region_failures = 0
    oracle_instances = region_points = 0

    samples = [
        random_grid_sample(rng, int(rng.integers(1, MAX_ORACLE_LINES + 1)), int(d))
        for d in rng.choice(ARRANGEMENT_DS, size=instances)
    ]
    for index, sample in enumerate(samples + adversarial_samples()):
        arr = build_arrangement(sample)
        d = arr.grid.d
        if sum((face.area for face in arr.faces), Fraction(0)) != arr.box_area:
            area_failures += 1

        if len(arr.lines) <= MAX_ORACLE_LINES:
            oracle_instances += 1
            signs = {signs for signs, _ in face_sign_oracle(sample)}
            if signs != arr.sign_vectors():
                oracle_failures += 1

        smallest = min(face.area for face in arr.faces)
        separation = min_vertex_separation(arr)
        if smallest < min_face_area_bound(d) or separation < vertex_separation_bound(d) ** 2:
            bound_failures += 1

        if index < instances:
            face_rng = split_rng(rng, 1)[0]
            for face in arr.faces[:10]:
                for _ in range(5):
                    a, b = uniform_point_in_face(face, face_rng)
                    region_points += 1
                    if _below_mask(arr, a, b) != face.below_mask:
                        region_failures += 1

    described = f"{instances} random + {len(adversarial_samples())} adversarial instances"
    return [
        OracleReport.check("area-conservation", described, 0, area_failures),
        OracleReport.check(
            "sign-oracle-equivalence", f"{oracle_instances} instances", 0, oracle_failures
        ),
        OracleReport.check("face-area-and-separation-bounds", described, 0, bound_failures),
        OracleReport.check(
            "region-equivalence", f"{region_points} interior points", 0, region_failures
        ),
    ]


def selectors_suite(rng: np.random.Generator, scale: float = 1.0) -> list[OracleReport]:
    instances = _scaled(20, scale)
    halfplane_gap = 0.0
    triangle_gap = 0.0
    literal_gap = 0.0

    for _ in range(instances):
        mode = Mode.AND if rng.random() < 0.5 else Mode.OR
        k = int(rng.integers(1, 4))
        b_j = float(rng.uniform(0, 6))

        sample = random_grid_sample(rng, int(rng.integers(2, 9)), 8)
        arr = build_arrangement(sample)
        gq = GeometricQuality(mode, b_j, k, sample)
        candidates = face_candidates(arr)
        naive = exhaustive_hypothesis_scores(gq, candidates).scores
        halfplane_gap = max(halfplane_gap, float(np.max(np.abs(naive - candidate_scores(arr, gq)))))

        small = random_grid_sample(rng, 3, 8)
        arr = build_arrangement(small)
        gq = GeometricQuality(mode, b_j, k, small)
        candidates = face_candidates(arr)
        count = len(candidates)
        for first in rng.choice(count, size=min(count, 2), replace=False):
            first = int(first)
            triangles = [
                Triangle((candidates[first], candidates[j], candidates[m]))
                for j in range(count)
                for m in range(count)
            ]
            naive = exhaustive_hypothesis_scores(gq, triangles).scores.reshape(count, count)
            gap = float(np.max(np.abs(naive - triangle_scores(arr, gq, first))))
            triangle_gap = max(triangle_gap, gap)

        bools = random_bool_sample(rng, int(rng.integers(2, 12)), int(rng.integers(1, 6)))
        gq = GeometricQuality(mode, b_j, k, bools)
        literals = literal_candidates(bools.d, mode)
        naive = exhaustive_hypothesis_scores(gq, literals).scores
        fast = literal_quality_table(gq, literals).scores
        literal_gap = max(literal_gap, float(np.max(np.abs(naive - fast))))

    described = f"{instances} instances, both modes"
    return [
        OracleReport.check(
            "halfplane-mask-scores", described, 0.0, halfplane_gap, SCORE_TOLERANCE,
            Comparison.AT_MOST,
        ),
        OracleReport.check(
            "triangle-mask-scores", described, 0.0, triangle_gap, SCORE_TOLERANCE,
            Comparison.AT_MOST,
        ),
        OracleReport.check(
            "literal-table-scores", described, 0.0, literal_gap, SCORE_TOLERANCE,
            Comparison.AT_MOST,
        ),
    ]


def _halfplane_candidate(arr: Arrangement, face_of_mask: dict[int, int], h: Halfplane) -> int:
    a, b, z = h.decode()
    return 2 * face_of_mask[_below_mask(arr, a, b)] + (0 if z == 1 else 1)


def em_pmf_suite(rng: np.random.Generator, scale: float = 1.0) -> list[OracleReport]:
    reports = []
    finite_rng, halfplane_rng, triangle_rng, laplace_rng = split_rng(rng, 4)

    draws = _scaled(100_000, scale)
    table = QualityTable(tuple(range(6)), np.array([0.0, -1.0, -2.0, 0.5, -0.5, -3.0]))
    pmf = exact_selection_pmf(table, 1.0)
    picks = [exp_mech_finite(table, 1.0, finite_rng) for _ in range(draws)]
    counts = np.bincount(np.asarray(picks, dtype=np.int64), minlength=len(table))
    reports.append(
        OracleReport.check(
            "exp-mech-finite-chisquare", f"6 candidates, {draws} draws", PVALUE_FLOOR,
            chisquare_pvalue(counts, pmf), comparison=Comparison.AT_LEAST,
        )
    )

    draws = _scaled(3_000, scale)
    sample = LabeledSample.grid_sample([(1, 2), (3, 1), (2, 4)], [0, 1, 0], 4)
    arr = build_arrangement(sample)
    gq = GeometricQuality(Mode.AND, 1.0, 1, sample)
    pmf = halfplane_selection_pmf(arr, gq, 1.0)
    face_of_mask = {face.below_mask: i for i, face in enumerate(arr.faces)}
    counts = np.zeros(len(pmf), dtype=np.int64)
    for stream in split_rng(halfplane_rng, draws):
        h = select_halfplane(gq, 1.0, stream, arrangement=arr)
        counts[_halfplane_candidate(arr, face_of_mask, h)] += 1
    reports.append(
        OracleReport.check(
            "halfplane-face-marginal-chisquare", f"3 examples, d=4, {draws} draws",
            PVALUE_FLOOR, chisquare_pvalue(counts, pmf), comparison=Comparison.AT_LEAST,
        )
    )

    draws = _scaled(20_000, scale)
    sample = LabeledSample.grid_sample([(1, 1), (3, 3)], [1, 0], 4)
    arr = build_arrangement(sample)
    gq = GeometricQuality(Mode.OR, 1.0, 1, sample)
    pmf = triangle_selection_pmf(arr, gq, 1.0)
    counts = np.zeros(pmf.shape, dtype=np.int64)
    for stream in split_rng(triangle_rng, draws):
        counts[draw_candidate_triple(arr, gq, 1.0, stream)] += 1
    reports.append(
        OracleReport.check(
            "triangle-triple-chisquare", f"2 examples, d=4, {draws} draws", PVALUE_FLOOR,
            chisquare_pvalue(counts, pmf), comparison=Comparison.AT_LEAST,
        )
    )

    draws = _scaled(1_000_000, scale)
    values = np.abs(laplace_rng.laplace(0.0, 1.0, size=draws))
    for t in (1, 2, 4):
        bound = 1.05 * math.exp(-t)
        observed = float(np.count_nonzero(values > t)) / draws
        slack = 4.0 * math.sqrt(math.exp(-t) / draws)
        reports.append(
            OracleReport.check(
                f"laplace-tail-t{t}", f"{draws} draws", bound, observed, slack,
                Comparison.AT_MOST,
            )
        )
    return reports


def privacy_ratio_suite(rng: np.random.Generator, scale: float = 1.0) -> list[OracleReport]:
    states = _scaled(100, scale)
    failures = 0
    for _ in range(states):
        d = int(rng.integers(1, 5))
        sample = random_bool_sample(rng, int(rng.integers(1, 10)), d)
        mode = Mode.AND if rng.random() < 0.5 else Mode.OR
        k = int(rng.integers(1, 3))
        budget = PrivacyBudget.derive(float(rng.uniform(0.5, 4.0)), 1e-6, k, 0.25)
        cfg = LearnerConfig(k=k, alpha=0.25, beta=0.1, budget=budget, mode=mode)
        extra = rng.integers(0, 2, size=d).tolist()
        noise = rng.integers(-3, 4, size=int(rng.integers(1, 4))).tolist()
        for label in (0, 1):
            result = neighbor_ratio_check(sample, extra, label, cfg, noise)
            if not result.passed:
                failures += 1
    return [
        OracleReport.check(
            "neighbor-ratio", f"{states} states, both labels, both modes", 0, failures
        )
    ]


SUITES: dict[str, Callable[[np.random.Generator, float], list[OracleReport]]] = {
    "arrangement": arrangement_suite,
    "selectors": selectors_suite,
    "em-pmf": em_pmf_suite,
    "privacy-ratio": privacy_ratio_suite,
}


def run_suites(
    names: Iterable[str] | None = None,
    seed: int = 0,
    scale: float = 1.0,
) -> list[OracleReport]:
    """Run the named suites (all by default) and collect their reports.

    Args:
        names: Suite names; see ``SUITES``
        seed: Root seed; each suite gets its own child stream
        scale: Multiplier for instance and draw counts

    Returns:
        Reports in suite order
    """
    selected = list(SUITES) if names is None else list(names)
    unknown = [name for name in selected if name not in SUITES]
    if unknown:
        raise ParameterError(f"unknown suite(s) {', '.join(unknown)}; choose from {list(SUITES)}")
    if scale <= 0:
        raise ParameterError(f"scale must be positive, got {scale}")

    streams = dict(zip(SUITES, split_rng(make_rng(seed), len(SUITES))))
    reports: list[OracleReport] = []
    for name in selected:
        suite_reports = SUITES[name](streams[name], scale)
        failed = sum(not report.passed for report in suite_reports)
        logger.info("suite %s: %d checks, %d failed", name, len(suite_reports), failed)
        reports.extend(suite_reports)
    return reports

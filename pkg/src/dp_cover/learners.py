"""End-to-end private learners and sample-size calculators."""

from __future__ import annotations

import math
from enum import Enum
from typing import Literal as TypingLiteral

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from .concepts.base import LabeledSample, SampleKind
from .concepts.expr import HypothesisExpr
from .errors import KindMismatchError, ParameterError
from .privacy.budget import BudgetRule, PrivacyBudget
from .selectors import (
    DEFAULT_TRIPLE_CAP,
    HalfplaneSelector,
    LiteralSelector,
    Mode,
    Selector,
    TriangleSelector,
)
from .setcover import LearnerConfig, RunTrace, run_setcover


class ConceptClass(str, Enum):
    CONJ = "CONJ"
    DISJ = "DISJ"
    CONVEX_KGON = "CONVEX_KGON"
    K_UNION_GON = "K_UNION_GON"

    @property
    def kind(self) -> SampleKind:
        boolean = self in (ConceptClass.CONJ, ConceptClass.DISJ)
        return SampleKind.BOOL if boolean else SampleKind.GRID

    @property
    def mode(self) -> Mode:
        return Mode.AND if self in (ConceptClass.CONJ, ConceptClass.CONVEX_KGON) else Mode.OR


class TaskSpec(BaseModel):
    """A learning task: concept class, its size parameters, accuracy and privacy.

    ``d`` is the grid resolution for geometric classes and the number of
    variables for Boolean ones.
    """

    model_config = ConfigDict(frozen=True)

    concept_class: ConceptClass
    k: int = Field(ge=1)
    d: int = Field(ge=1)
    alpha: float = Field(gt=0, lt=1)
    beta: float = Field(gt=0, lt=1)
    epsilon: float = Field(gt=0)
    delta: float = Field(default=1e-6, ge=0, lt=1)
    budget_rule: BudgetRule = BudgetRule.SET_COVER
    vc_constant: float = Field(default=1.0, gt=0)
    triple_cap: int = Field(default=DEFAULT_TRIPLE_CAP, ge=1)

    @model_validator(mode="after")
    def _check_delta(self) -> TaskSpec:
        if self.budget_rule is BudgetRule.SET_COVER and not 0 < self.delta < 1 / math.e:
            raise ValueError(f"delta must lie in (0, 1/e) for the set_cover rule, not {self.delta}")
        if self.budget_rule is BudgetRule.ADVANCED and self.delta == 0:
            raise ValueError("the advanced rule needs delta > 0")
        return self

    @property
    def kind(self) -> SampleKind:
        return self.concept_class.kind

    @property
    def mode(self) -> Mode:
        return self.concept_class.mode

    def budget(self) -> PrivacyBudget:
        return PrivacyBudget.derive(
            self.epsilon, self.delta, self.k, self.alpha, rule=self.budget_rule
        )

    def learner_config(self) -> LearnerConfig:
        return LearnerConfig(
            k=self.k,
            alpha=self.alpha,
            beta=self.beta,
            budget=self.budget(),
            mode=self.mode,
            selection=self.selector().name,
            triple_cap=self.triple_cap,
        )

    def selector(self) -> Selector:
        if self.concept_class is ConceptClass.CONJ:
            return LiteralSelector(self.d, Mode.AND)
        if self.concept_class is ConceptClass.DISJ:
            return LiteralSelector(self.d, Mode.OR)
        if self.concept_class is ConceptClass.CONVEX_KGON:
            return HalfplaneSelector()
        return TriangleSelector(self.triple_cap)


def composed_vc(vc: float, m: int) -> float:
    """VC bound of m-fold AND/OR compositions: m·max(1, log₂ m)·vc."""
    if m < 1:
        raise ParameterError(f"composition size must be at least 1, got {m}")
    return m * max(1.0, math.log2(m)) * vc


def vc_dimension(concept_class: ConceptClass | str, d: int) -> float:
    """VC dimension (or bound) of the base predicate family a class selects from.

    Literals: log₂(2d) from the finite class size; halfplanes: 3; triangles: the
    composition bound for an AND of three halfplanes.
    """
    concept_class = ConceptClass(concept_class)
    if concept_class.kind is SampleKind.BOOL:
        return math.log2(2 * d)
    if concept_class is ConceptClass.CONVEX_KGON:
        return 3.0
    return composed_vc(3.0, 3)


def _check_accuracy(alpha: float, beta: float) -> None:
    if not 0 < alpha < 1:
        raise ParameterError(f"alpha must lie in (0, 1), got {alpha}")
    if not 0 < beta < 1:
        raise ParameterError(f"beta must lie in (0, 1), got {beta}")


def geometric_sample_size(spec: TaskSpec, vc_constant: float | None = None) -> int:
    """c·(k/(αε))·ln(1/α)·ln(1/δ)·ln((d·k/β)·ln(1/α)) for the geometric classes."""
    if spec.delta <= 0:
        raise ParameterError("the geometric sample size needs delta > 0")
    c = spec.vc_constant if vc_constant is None else vc_constant
    log_alpha = math.log(1.0 / spec.alpha)
    n = (
        c
        * spec.k
        / (spec.alpha * spec.epsilon)
        * log_alpha
        * math.log(1.0 / spec.delta)
        * math.log(spec.d * spec.k / spec.beta * log_alpha)
    )
    return max(1, math.ceil(n))


def required_sample_size(
    spec: TaskSpec,
    lam: float = 0.0,
    vc_constant: float | None = None,
    rule: TypingLiteral["generic", "geometric"] = "generic",
    vc: float | None = None,
) -> int:
    """Sample size for the set-cover learner of ``spec``.

    The generic rule is
    c·(k·ln(1/α)/α)·(VC·ln(e·k) + λ + (1/ε)·ln((k/β)·ln(1/α))).

    Args:
        spec: Learning task
        lam: Per-iteration quality shortfall of the selector
        vc_constant: The constant c; defaults to ``spec.vc_constant``
        rule: "generic" or the class-specific "geometric" bound
        vc: Override of the base family's VC dimension

    Returns:
        The sample size, at least 1
    """
    _check_accuracy(spec.alpha, spec.beta)
    if lam < 0:
        raise ParameterError(f"lambda must be non-negative, got {lam}")
    c = spec.vc_constant if vc_constant is None else vc_constant
    if c <= 0:
        raise ParameterError(f"vc_constant must be positive, got {c}")
    if rule == "geometric":
        if spec.kind is not SampleKind.GRID:
            raise ParameterError("the geometric sample size applies to grid classes only")
        return geometric_sample_size(spec, c)
    if rule != "generic":
        raise ParameterError(f"unknown sample size rule {rule!r}")

    vc = vc_dimension(spec.concept_class, spec.d) if vc is None else vc
    log_alpha = math.log(1.0 / spec.alpha)
    leading = spec.k * log_alpha / spec.alpha
    inner = (
        vc * math.log(math.e * spec.k)
        + lam
        + math.log(spec.k / spec.beta * log_alpha) / spec.epsilon
    )
    return max(1, math.ceil(c * leading * inner))


def generalization_sample_size(vc: float, alpha: float, beta: float) -> int:
    """Examples after which training error ≤ α/2 implies true error ≤ α w.p. 1 − β."""
    _check_accuracy(alpha, beta)
    return math.ceil(64.0 / alpha * (vc * math.log(64.0 / alpha) + math.log(8.0 / beta)))


def _check_sample(spec: TaskSpec, sample: LabeledSample) -> None:
    if sample.kind is not spec.kind:
        raise KindMismatchError(
            f"{spec.concept_class.value} learns from {spec.kind.value} examples, "
            f"got {sample.kind.value}"
        )
    if sample.d != spec.d:
        raise ParameterError(f"task has d={spec.d} but the sample has d={sample.d}")


def learn_with_trace(
    spec: TaskSpec, sample: LabeledSample, rng: np.random.Generator
) -> tuple[HypothesisExpr, RunTrace]:
    """Learn a hypothesis privately and keep the per-iteration trace."""
    _check_sample(spec, sample)
    return run_setcover(sample, spec.learner_config(), spec.selector(), rng)


def learn(spec: TaskSpec, sample: LabeledSample, rng: np.random.Generator) -> HypothesisExpr:
    """Learn a hypothesis for ``spec`` from ``sample``.

    CONJ and CONVEX_KGON cover negatives (conjunction of literals or halfplanes);
    DISJ and K_UNION_GON cover positives (disjunction of literals or triangles).
    """
    hypothesis, _ = learn_with_trace(spec, sample, rng)
    return hypothesis

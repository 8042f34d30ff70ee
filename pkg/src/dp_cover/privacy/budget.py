"""Privacy budget derivation for the set-cover learner."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from enum import Enum
from typing import Any

from ..errors import ParameterError


class BudgetRule(str, Enum):
    """How the overall (ε, δ) is split across the learner's iterations."""

    SET_COVER = "set_cover"  # ε̂ = ε / (2 ln(e/δ))
    BASIC = "basic"  # ε̂ = ε / T
    ADVANCED = "advanced"  # largest ε̂ with sqrt(2T ln(1/δ)) ε̂ + 2T ε̂² ≤ ε


def iteration_count(k: int, alpha: float) -> int:
    """Number of set-cover iterations, ⌈2k·log₂(2/α)⌉."""
    if k < 1:
        raise ParameterError(f"k must be at least 1, got {k}")
    if not 0 < alpha < 1:
        raise ParameterError(f"alpha must lie in (0, 1), got {alpha}")
    return max(1, math.ceil(2 * k * math.log2(2.0 / alpha)))


def noise_scale(k: int, alpha: float, epsilon: float) -> float:
    """Laplace scale of the threshold noise, (2k/ε)·ln(2/α)."""
    return 2.0 * k / epsilon * math.log(2.0 / alpha)


def set_cover_step_epsilon(epsilon: float, delta: float) -> float:
    """Per-iteration ε̂ = ε / (2 ln(e/δ)); requires 0 < δ < 1/e."""
    if not 0 < delta < 1 / math.e:
        raise ParameterError(f"delta must lie in (0, 1/e) for this rule, got {delta}")
    return epsilon / (2.0 * (1.0 - math.log(delta)))


def basic_step_epsilon(epsilon: float, iterations: int) -> float:
    return epsilon / iterations


def advanced_step_epsilon(epsilon: float, delta: float, iterations: int) -> float:
    """Solve 2T x² + sqrt(2T ln(1/δ)) x − ε = 0 for its positive root."""
    if not 0 < delta < 1:
        raise ParameterError(f"delta must lie in (0, 1) for advanced composition, got {delta}")
    linear = math.sqrt(2.0 * iterations * math.log(1.0 / delta))
    quadratic = 2.0 * iterations
    return (-linear + math.sqrt(linear * linear + 4.0 * quadratic * epsilon)) / (2.0 * quadratic)


@dataclass(frozen=True)
class PrivacyBudget:
    """Overall (ε, δ) with the derived per-step quantities.

    Attributes:
        epsilon: Overall ε
        delta: Overall δ
        step_epsilon: Per-iteration ε̂ handed to the selector
        noise_scale: Scale of the Laplace noise on the threshold
        rule: Rule that produced ``step_epsilon``
    """

    epsilon: float
    delta: float
    step_epsilon: float
    noise_scale: float
    rule: BudgetRule = BudgetRule.SET_COVER

    def __post_init__(self) -> None:
        if not (math.isfinite(self.epsilon) and self.epsilon > 0):
            raise ParameterError(f"epsilon must be positive, got {self.epsilon}")
        if not 0 <= self.delta < 1:
            raise ParameterError(f"delta must lie in [0, 1), got {self.delta}")
        if not self.step_epsilon > 0:
            raise ParameterError(f"step epsilon must be positive, got {self.step_epsilon}")
        if not self.noise_scale > 0:
            raise ParameterError(f"noise scale must be positive, got {self.noise_scale}")

    @classmethod
    def derive(
        cls,
        epsilon: float,
        delta: float,
        k: int,
        alpha: float,
        rule: BudgetRule = BudgetRule.SET_COVER,
        iterations: int | None = None,
    ) -> PrivacyBudget:
        """Derive the per-step budget for a run of the set-cover learner.

        Args:
            epsilon: Overall ε (> 0)
            delta: Overall δ
            k: Clause budget
            alpha: Target accuracy
            rule: Budget split rule
            iterations: Iteration count; defaults to ⌈2k·log₂(2/α)⌉

        Returns:
            The derived budget
        """
        if not (math.isfinite(epsilon) and epsilon > 0):
            raise ParameterError(f"epsilon must be positive, got {epsilon}")
        if not 0 <= delta < 1:
            raise ParameterError(f"delta must lie in [0, 1), got {delta}")
        rounds = iterations if iterations is not None else iteration_count(k, alpha)
        if rounds < 1:
            raise ParameterError(f"iteration count must be positive, got {rounds}")

        rule = BudgetRule(rule)
        if rule is BudgetRule.SET_COVER:
            step = set_cover_step_epsilon(epsilon, delta)
        elif rule is BudgetRule.BASIC:
            step = basic_step_epsilon(epsilon, rounds)
        else:
            step = advanced_step_epsilon(epsilon, delta, rounds)

        return cls(
            epsilon=epsilon,
            delta=delta,
            step_epsilon=step,
            noise_scale=noise_scale(k, alpha, epsilon),
            rule=rule,
        )

    def to_dict(self) -> dict[str, Any]:
        data = asdict(self)
        data["rule"] = self.rule.value
        return data

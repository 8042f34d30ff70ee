"""Outcome records of the brute-force verifiers."""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Any


class Comparison(str, Enum):
    EQUAL = "equal"
    AT_MOST = "at_most"
    AT_LEAST = "at_least"


@dataclass(frozen=True)
class OracleReport:
    """One verified claim: what was expected, what was observed, and the verdict.

    Attributes:
        test_name: Name of the check
        instance: Short description of the instance
        expected: Exact expected value, or the bound for one-sided checks
        observed: Observed value
        verdict: "pass" or "fail"
        tolerance: Allowed slack (0 for exact checks)
        comparison: How observed is compared with expected
    """

    test_name: str
    instance: str
    expected: Any
    observed: Any
    verdict: str
    tolerance: float = 0.0
    comparison: Comparison = Comparison.EQUAL

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"

    @classmethod
    def check(
        cls,
        test_name: str,
        instance: str,
        expected: Any,
        observed: Any,
        tolerance: float = 0.0,
        comparison: Comparison = Comparison.EQUAL,
    ) -> OracleReport:
        comparison = Comparison(comparison)
        if comparison is Comparison.EQUAL:
            if tolerance == 0:
                ok = observed == expected
            else:
                ok = abs(float(observed) - float(expected)) <= tolerance
        elif comparison is Comparison.AT_MOST:
            ok = float(observed) <= float(expected) + tolerance
        else:
            ok = float(observed) >= float(expected) - tolerance
        return cls(
            test_name=test_name,
            instance=instance,
            expected=expected,
            observed=observed,
            verdict="pass" if ok else "fail",
            tolerance=tolerance,
            comparison=comparison,
        )

    def to_dict(self) -> dict[str, Any]:
        return {
            "test_name": self.test_name,
            "instance": self.instance,
            "expected": _jsonable(self.expected),
            "observed": _jsonable(self.observed),
            "verdict": self.verdict,
            "tolerance": self.tolerance,
            "comparison": self.comparison.value,
        }


def _jsonable(value: Any) -> Any:
    if isinstance(value, bool | int | str) or value is None:
        return value
    if isinstance(value, float):
        return value if math.isfinite(value) else str(value)
    try:
        return float(value)
    except (TypeError, ValueError):
        return str(value)

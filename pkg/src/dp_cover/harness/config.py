"""Experiment configuration: a TOML file validated by pydantic, overridable by flags."""

from __future__ import annotations

import hashlib
import json
import sys
from pathlib import Path
from typing import Any, Literal

if sys.version_info >= (3, 11):
    import tomllib
else:  # pragma: no cover - Python 3.10 backport with the same API
    import tomli as tomllib

from pydantic import BaseModel, ConfigDict, Field, model_validator

from .. import __version__
from ..concepts.base import SampleKind
from ..datagen.distributions import Distribution
from ..errors import ParameterError
from ..learners import TaskSpec, required_sample_size

# Keys that change where results go, not what they are.
_UNHASHED = {"output", "workers"}


class ExperimentConfig(BaseModel):
    """Everything needed to reproduce an experiment from its seeds.

    Attributes:
        task: Learning task
        distribution: Example distribution; defaults by sample kind
        sigma: Band half-width of the boundary mixture, as a fraction of d
        trials: Number of trials when ``seeds`` is not given
        seeds: Explicit per-trial seeds
        base_seed: First seed of the default seed list
        n: Training sample size, or "auto" for the sample-size calculator
        n_cap: Upper bound applied to the automatic sample size
        heldout: Fresh points used to measure generalisation error
        lam: Selector quality shortfall fed to the sample-size calculator
        sample_size_rule: "generic" or "geometric"
        output: CSV file for per-trial rows
        workers: Worker processes
        time_budget_s: Stop starting new trials after this many seconds
        trace: Write a run trace per trial
    """

    model_config = ConfigDict(frozen=True)

    task: TaskSpec
    distribution: Distribution | None = None
    sigma: float = Field(default=0.05, ge=0)
    trials: int = Field(default=1, ge=1)
    seeds: list[int] | None = None
    base_seed: int = Field(default=0, ge=0)
    n: int | Literal["auto"] = "auto"
    n_cap: int = Field(default=1000, ge=1)
    heldout: int = Field(default=100_000, ge=1)
    lam: float = Field(default=0.0, ge=0)
    sample_size_rule: Literal["generic", "geometric"] = "generic"
    output: Path = Path("results/experiment.csv")
    workers: int = Field(default=1, ge=1)
    time_budget_s: float | None = Field(default=None, gt=0)
    trace: bool = False

    @model_validator(mode="after")
    def _check(self) -> ExperimentConfig:
        if isinstance(self.n, int) and self.n < 1:
            raise ValueError(f"n must be at least 1, got {self.n}")
        if self.seeds is not None:
            if not self.seeds:
                raise ValueError("seeds must not be empty")
            if any(seed < 0 for seed in self.seeds):
                raise ValueError("seeds must be non-negative")
        if self.distribution is not None:
            boolean = self.distribution is Distribution.UNIFORM_BOOL
            if boolean != (self.task.kind is SampleKind.BOOL):
                raise ValueError(
                    f"{self.distribution.value} does not match {self.task.concept_class.value}"
                )
        return self

    @classmethod
    def from_toml(cls, path: Path) -> ExperimentConfig:
        """Load a config file; the task lives in a ``[task]`` table."""
        return cls.model_validate(_load_toml(path))

    @classmethod
    def from_sources(cls, path: Path | None, overrides: dict[str, Any]) -> ExperimentConfig:
        """Config file values (if any) with non-None overrides applied on top."""
        data = _load_toml(path) if path is not None else {}
        return cls.model_validate(_apply_overrides(data, overrides))

    def merged(self, overrides: dict[str, Any]) -> ExperimentConfig:
        """A copy with non-None overrides applied; task fields are routed to the task."""
        return ExperimentConfig.model_validate(_apply_overrides(self.model_dump(), overrides))

    @property
    def resolved_distribution(self) -> Distribution:
        if self.distribution is not None:
            return self.distribution
        if self.task.kind is SampleKind.BOOL:
            return Distribution.UNIFORM_BOOL
        return Distribution.UNIFORM_GRID

    def seed_list(self) -> list[int]:
        if self.seeds is not None:
            return list(self.seeds)
        return [self.base_seed + i for i in range(self.trials)]

    def resolved_n(self) -> int:
        if self.n != "auto":
            return int(self.n)
        n = required_sample_size(self.task, self.lam, rule=self.sample_size_rule)
        return min(n, self.n_cap)

    def config_hash(self) -> str:
        """SHA-256 of the canonical JSON of the experiment-defining fields."""
        payload = self.model_dump(mode="json", exclude=_UNHASHED)
        canonical = json.dumps(payload, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(canonical.encode("utf-8")).hexdigest()

    def metadata(self, seed: int | None = None) -> dict[str, Any]:
        """Provenance block written into every artefact."""
        block: dict[str, Any] = {
            "version": __version__,
            "config_sha256": self.config_hash(),
        }
        if seed is not None:
            block["seed"] = seed
        else:
            block["seeds"] = self.seed_list()
        return block


def _load_toml(path: Path) -> dict[str, Any]:
    try:
        with open(path, "rb") as f:
            return tomllib.load(f)
    except tomllib.TOMLDecodeError as e:
        raise ParameterError(f"{path}: {e}") from e


def _apply_overrides(data: dict[str, Any], overrides: dict[str, Any]) -> dict[str, Any]:
    data = dict(data)
    task = dict(data.get("task", {}))
    for key, value in overrides.items():
        if value is None:
            continue
        if key in TaskSpec.model_fields:
            task[key] = value
        else:
            data[key] = value
    data["task"] = task
    return data

"""Per-seed trials and the experiment loop that writes them as CSV rows."""

from __future__ import annotations

import csv
import json
import logging
import time
from collections.abc import Callable
from concurrent.futures import Future, ProcessPoolExecutor
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Any

import numpy as np

from ..concepts.base import LabeledSample
from ..datagen.distributions import sample_distribution
from ..datagen.targets import TargetConcept, label_by_target, make_target
from ..errors import ResourceCapError
from ..learners import learn_with_trace
from ..privacy.rng import make_rng, split_rng
from .config import ExperimentConfig
from .evaluate import heldout_error, training_error

logger = logging.getLogger(__name__)

CSV_COLUMNS = [
    "seed",
    "n",
    "epsilon",
    "delta",
    "alpha",
    "k",
    "d",
    "train_error",
    "heldout_error",
    "wall_time",
    "iterations",
]


@dataclass
class TrialResult:
    """One CSV row."""

    seed: int
    n: int
    epsilon: float
    delta: float
    alpha: float
    k: int
    d: int
    train_error: float
    heldout_error: float
    wall_time: float
    iterations: int

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_row(cls, row: dict[str, str]) -> TrialResult:
        return cls(
            seed=int(row["seed"]),
            n=int(row["n"]),
            epsilon=float(row["epsilon"]),
            delta=float(row["delta"]),
            alpha=float(row["alpha"]),
            k=int(row["k"]),
            d=int(row["d"]),
            train_error=float(row["train_error"]),
            heldout_error=float(row["heldout_error"]),
            wall_time=float(row["wall_time"]),
            iterations=int(row["iterations"]),
        )


def trace_path(output: Path, seed: int) -> Path:
    return output.with_name(f"{output.stem}.trace-{seed}.json")


def meta_path(output: Path) -> Path:
    return output.with_name(f"{output.stem}.meta.json")


def _trial_streams(seed: int) -> list[np.random.Generator]:
    """Target, data, learning and held-out streams of one seed."""
    return split_rng(make_rng(seed), 4)


def generate_data(config: ExperimentConfig, seed: int) -> tuple[TargetConcept, LabeledSample]:
    """The target and labelled training sample a trial with this seed learns from."""
    target_rng, data_rng, _, _ = _trial_streams(seed)
    target = make_target(config.task, target_rng)
    points = sample_distribution(
        config.resolved_distribution,
        config.resolved_n(),
        config.task.d,
        data_rng,
        target=target,
        sigma=config.sigma,
    )
    return target, label_by_target(points, target)


def run_trial(config: ExperimentConfig, seed: int) -> TrialResult:
    """Draw a target and a sample from ``seed``, learn, and measure both errors.

    The seed's root generator is split into target, data, learning and held-out
    streams, so a row can be reproduced from its seed alone.
    """
    task = config.task
    _, _, learn_rng, heldout_rng = _trial_streams(seed)
    target, sample = generate_data(config, seed)
    n = len(sample)
    distribution = config.resolved_distribution

    start = time.perf_counter()
    hypothesis, trace = learn_with_trace(task, sample, learn_rng)
    wall_time = time.perf_counter() - start

    if config.trace:
        path = trace_path(config.output, seed)
        path.parent.mkdir(parents=True, exist_ok=True)
        payload = {"metadata": config.metadata(seed), "trace": trace.to_dict()}
        path.write_text(json.dumps(payload, indent=2, sort_keys=True), encoding="utf-8")

    return TrialResult(
        seed=seed,
        n=n,
        epsilon=task.epsilon,
        delta=task.delta,
        alpha=task.alpha,
        k=task.k,
        d=task.d,
        train_error=training_error(hypothesis, sample),
        heldout_error=heldout_error(
            hypothesis, target, distribution, config.heldout, heldout_rng, config.sigma
        ),
        wall_time=wall_time,
        iterations=len(trace.records),
    )


def read_results(path: Path) -> list[TrialResult]:
    if not path.exists():
        return []
    with open(path, newline="", encoding="utf-8") as f:
        return [TrialResult.from_row(row) for row in csv.DictReader(f)]


def _write_meta(config: ExperimentConfig) -> None:
    path = meta_path(config.output)
    payload = {"metadata": config.metadata(), "config": config.model_dump(mode="json")}
    path.write_text(json.dumps(payload, indent=2, sort_keys=True), encoding="utf-8")


def run_experiment(
    config: ExperimentConfig,
    on_trial: Callable[[TrialResult | None], None] | None = None,
) -> list[TrialResult]:
    """Run every pending seed and append one CSV row per finished trial.

    Seeds already present in the output file are skipped, so an interrupted run
    resumes where it stopped. A failing trial is logged and skipped; rows are
    flushed as they finish. No new trial starts once ``time_budget_s`` is spent.
    A ``ResourceCapError`` stops the run.

    Args:
        config: Experiment configuration
        on_trial: Called after each trial with its row, or ``None`` on failure

    Returns:
        Rows written by this call, in completion order
    """
    output = config.output
    output.parent.mkdir(parents=True, exist_ok=True)
    done = {row.seed for row in read_results(output)}
    pending = [seed for seed in config.seed_list() if seed not in done]
    if done:
        logger.info("resuming %s: %d rows present, %d pending", output, len(done), len(pending))
    _write_meta(config)

    new_file = not output.exists() or output.stat().st_size == 0
    results: list[TrialResult] = []
    started = time.monotonic()

    def over_budget() -> bool:
        budget = config.time_budget_s
        return budget is not None and time.monotonic() - started >= budget

    with open(output, "a", newline="", encoding="utf-8") as f:
        writer = csv.DictWriter(f, fieldnames=CSV_COLUMNS)
        if new_file:
            writer.writeheader()
            f.flush()

        def record(result: TrialResult | None) -> None:
            if result is not None:
                writer.writerow(result.to_dict())
                f.flush()
                results.append(result)
            if on_trial is not None:
                on_trial(result)

        if config.workers == 1:
            for started_count, seed in enumerate(pending):
                if over_budget():
                    skipped = len(pending) - started_count
                    logger.warning("time budget spent, %d trials not started", skipped)
                    break
                try:
                    result: TrialResult | None = run_trial(config, seed)
                except ResourceCapError:
                    raise
                except Exception:
                    logger.exception("trial %d failed", seed)
                    result = None
                record(result)
        else:
            with ProcessPoolExecutor(max_workers=config.workers) as pool:
                futures: dict[Future[TrialResult], int] = {
                    pool.submit(run_trial, config, seed): seed for seed in pending
                }
                for future, seed in futures.items():
                    if over_budget() and future.cancel():
                        continue
                    try:
                        result = future.result()
                    except ResourceCapError:
                        for pending_future in futures:
                            pending_future.cancel()
                        raise
                    except Exception:
                        logger.exception("trial %d failed", seed)
                        result = None
                    record(result)

    logger.info("%d of %d pending trials written to %s", len(results), len(pending), output)
    return results

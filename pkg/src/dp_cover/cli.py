"""CLI entry point for dp-cover."""

from __future__ import annotations

import functools
import json
import logging
from collections.abc import Callable
from pathlib import Path
from typing import Any

import click
from pydantic import ValidationError
from rich.console import Console
from rich.logging import RichHandler
from rich.markup import escape
from rich.panel import Panel
from rich.progress import BarColumn, MofNCompleteColumn, Progress, SpinnerColumn, TextColumn
from rich.table import Table

from . import __version__
from .concepts.base import SampleKind
from .concepts.expr import empirical_error, leaves
from .concepts.io import (
    read_hypothesis_json,
    read_sample_jsonl,
    write_hypothesis_json,
    write_sample_jsonl,
)
from .datagen.distributions import Distribution
from .datagen.targets import target_from_dict, target_to_dict
from .errors import (
    DPCoverError,
    KindMismatchError,
    ParameterError,
    ResourceCapError,
    VerificationError,
)
from .geometry import arrangement_to_dict, build_arrangement
from .harness.config import ExperimentConfig
from .harness.evaluate import heldout_error
from .harness.experiment import generate_data, read_results, run_experiment
from .harness.verify import SUITES, run_suites
from .learners import ConceptClass, learn_with_trace
from .privacy.budget import BudgetRule
from .privacy.rng import make_rng
from .selectors.quality import GeometricQuality, Mode

console = Console()

EXIT_CONFIG = 2
EXIT_RESOURCE_CAP = 3
EXIT_VERIFICATION = 4


def _fail(error: Exception, code: int) -> None:
    ctx = click.get_current_context()
    console.print(f"[bold red]Error:[/bold red] {escape(str(error))}")
    if ctx.obj and ctx.obj.get("verbose"):
        console.print_exception()
    ctx.exit(code)


def handle_errors(func: Callable[..., Any]) -> Callable[..., Any]:
    """Map library errors to exit codes instead of tracebacks."""

    @functools.wraps(func)
    def wrapper(*args: Any, **kwargs: Any) -> Any:
        try:
            return func(*args, **kwargs)
        except (ParameterError, KindMismatchError, ValidationError, FileNotFoundError) as e:
            _fail(e, EXIT_CONFIG)
        except ResourceCapError as e:
            _fail(e, EXIT_RESOURCE_CAP)
        except VerificationError as e:
            _fail(e, EXIT_VERIFICATION)
        except DPCoverError as e:
            _fail(e, 1)

    return wrapper


def task_options(func: Callable[..., Any]) -> Callable[..., Any]:
    """Flags that override the ``[task]`` table of a config file."""
    options = [
        click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False),
                     help="TOML config file"),
        click.option("--class", "concept_class", type=click.Choice([c.value for c in ConceptClass]),
                     help="Concept class"),
        click.option("-k", type=int, help="Clause budget (literals, edges or triangles)"),
        click.option("-d", type=int, help="Grid resolution or number of variables"),
        click.option("--alpha", type=float, help="Target accuracy"),
        click.option("--beta", type=float, help="Failure probability"),
        click.option("--epsilon", type=float, help="Overall privacy ε"),
        click.option("--delta", type=float, help="Overall privacy δ"),
        click.option("--budget-rule", type=click.Choice([r.value for r in BudgetRule]),
                     help="How ε is split across iterations"),
        click.option("--triple-cap", type=int, help="Cap on enumerated candidate triples"),
    ]
    for option in reversed(options):
        func = option(func)
    return func


def load_config(config_path: str | None, **overrides: Any) -> ExperimentConfig:
    return ExperimentConfig.from_sources(Path(config_path) if config_path else None, overrides)


def _parse_n(ctx: click.Context, param: click.Parameter, value: str | None) -> int | str | None:
    if value is None or value == "auto":
        return value
    try:
        return int(value)
    except ValueError:
        raise click.BadParameter("expected an integer or 'auto'") from None


def _parse_seeds(ctx: click.Context, param: click.Parameter, value: str | None) -> list[int] | None:
    if value is None:
        return None
    try:
        return [int(part) for part in value.split(",") if part.strip()]
    except ValueError:
        raise click.BadParameter("expected comma-separated integers") from None


def _write_json(payload: dict[str, Any], path: Path) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(payload, indent=2, sort_keys=True), encoding="utf-8")
    return path


@click.group()
@click.option("--verbose", "-v", is_flag=True, help="Debug logging and full tracebacks")
@click.version_option(__version__, prog_name="dp-cover")
@click.pass_context
def main(ctx: click.Context, verbose: bool):
    """dp-cover: differentially private set-cover learners."""
    ctx.ensure_object(dict)
    ctx.obj["verbose"] = verbose
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.WARNING,
        format="%(message)s",
        handlers=[RichHandler(console=Console(stderr=True), rich_tracebacks=verbose)],
        force=True,
    )


@main.command("gen-data")
@task_options
@click.option("--n", "n", callback=_parse_n, help="Sample size, or 'auto'")
@click.option("--distribution", type=click.Choice([d.value for d in Distribution]))
@click.option("--sigma", type=float, help="Boundary band width as a fraction of d")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--output", "-o", type=click.Path(dir_okay=False), required=True,
              help="Sample JSONL path")
@click.option("--target-output", type=click.Path(dir_okay=False),
              help="Target JSON path (default: next to the sample)")
@handle_errors
def gen_data(config_path, n, distribution, sigma, seed, output, target_output, **task):
    """Draw a random target and a labelled sample from it."""
    config = load_config(config_path, n=n, distribution=distribution, sigma=sigma, **task)
    target, sample = generate_data(config, seed)
    metadata = config.metadata(seed)

    sample_path = write_sample_jsonl(sample, Path(output), metadata)
    target_path = Path(target_output) if target_output else _sibling(sample_path, "target")
    _write_json({"metadata": metadata, "target": target_to_dict(target)}, target_path)

    console.print(
        f"[green]✓[/green] {len(sample):,} examples "
        f"({sample.count(1):,} positive) → {sample_path}"
    )
    console.print(f"[green]✓[/green] target → {target_path}")


def _sibling(path: Path, tag: str) -> Path:
    return path.with_name(f"{path.stem}.{tag}.json")


@main.command()
@click.option("--sample", "sample_path", type=click.Path(exists=True, dir_okay=False),
              required=True, help="Sample JSONL")
@task_options
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--output", "-o", type=click.Path(dir_okay=False),
              help="Hypothesis JSON path (default: next to the sample)")
@click.option("--trace/--no-trace", default=True, show_default=True,
              help="Also write the per-iteration run trace")
@click.option("--trace-output", type=click.Path(dir_okay=False))
@handle_errors
def learn(sample_path, seed, output, trace, trace_output, config_path, d, **task):
    """Learn a hypothesis privately from a sample."""
    sample = read_sample_jsonl(Path(sample_path))
    config = load_config(config_path, d=d if d is not None else sample.d, **task)
    metadata = config.metadata(seed)

    with Progress(
        SpinnerColumn(),
        TextColumn("[progress.description]{task.description}"),
        console=console,
    ) as progress:
        progress.add_task(f"Learning {config.task.concept_class.value}...", total=None)
        hypothesis, run_trace = learn_with_trace(config.task, sample, make_rng(seed))

    hypothesis_path = Path(output) if output else _sibling(Path(sample_path), "hypothesis")
    write_hypothesis_json(hypothesis, hypothesis_path, metadata)
    if trace:
        trace_path = Path(trace_output) if trace_output else _sibling(Path(sample_path), "trace")
        _write_json({"metadata": metadata, "trace": run_trace.to_dict()}, trace_path)

    budget = config.task.budget()
    table = Table(show_header=False, box=None)
    table.add_row("iterations", str(len(run_trace.records)))
    table.add_row("step ε̂", f"{budget.step_epsilon:.4g}")
    table.add_row("examples deleted", f"{run_trace.total_deleted:,} of {run_trace.initial_size:,}")
    table.add_row("predicates", str(len(leaves(hypothesis))))
    table.add_row("training error", f"{float(empirical_error(hypothesis, sample)):.4f}")
    console.print(Panel.fit(table, title="Learned hypothesis", border_style="cyan"))
    console.print(f"[green]✓[/green] hypothesis → {hypothesis_path}")
    if trace:
        console.print(f"[green]✓[/green] trace → {trace_path}")


@main.command("eval")
@click.option("--hypothesis", "hypothesis_path", type=click.Path(exists=True, dir_okay=False),
              required=True)
@click.option("--sample", "sample_path", type=click.Path(exists=True, dir_okay=False),
              help="Sample to measure training error on")
@click.option("--target", "target_path", type=click.Path(exists=True, dir_okay=False),
              help="Target JSON for held-out error on fresh points")
@click.option("--heldout", type=int, default=100_000, show_default=True)
@click.option("--distribution", type=click.Choice([d.value for d in Distribution]))
@click.option("--sigma", type=float, default=0.05, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--output", "-o", type=click.Path(dir_okay=False), help="Write results as JSON")
@handle_errors
def evaluate(hypothesis_path, sample_path, target_path, heldout, distribution, sigma, seed,
             output):
    """Training and held-out error of a learned hypothesis."""
    if sample_path is None and target_path is None:
        raise ParameterError("give --sample, --target or both")
    hypothesis = read_hypothesis_json(Path(hypothesis_path))
    results: dict[str, Any] = {}

    if sample_path is not None:
        sample = read_sample_jsonl(Path(sample_path))
        results["train_error"] = float(empirical_error(hypothesis, sample))
    if target_path is not None:
        payload = json.loads(Path(target_path).read_text(encoding="utf-8"))
        target = target_from_dict(payload.get("target", payload))
        if distribution is None:
            boolean = target.kind is SampleKind.BOOL
            distribution = Distribution.UNIFORM_BOOL if boolean else Distribution.UNIFORM_GRID
        results["heldout_error"] = heldout_error(
            hypothesis, target, distribution, heldout, make_rng(seed), sigma
        )
        results["heldout_points"] = heldout

    table = Table(title="Evaluation", show_header=True, header_style="bold magenta")
    table.add_column("Measure", style="cyan")
    table.add_column("Value", justify="right")
    for key, value in results.items():
        table.add_row(key, f"{value:.4f}" if isinstance(value, float) else f"{value:,}")
    console.print(table)

    if output:
        _write_json({"metadata": {"version": __version__, "seed": seed}, **results}, Path(output))


@main.command()
@task_options
@click.option("--trials", type=int, help="Number of trials (seeds base-seed, base-seed+1, ...)")
@click.option("--seeds", callback=_parse_seeds, help="Comma-separated seed list")
@click.option("--base-seed", type=int)
@click.option("--n", "n", callback=_parse_n, help="Sample size, or 'auto'")
@click.option("--n-cap", type=int, help="Cap on the automatic sample size")
@click.option("--heldout", type=int, help="Fresh points for held-out error")
@click.option("--distribution", type=click.Choice([d.value for d in Distribution]))
@click.option("--sigma", type=float)
@click.option("--workers", type=int, help="Worker processes")
@click.option("--time-budget", "time_budget_s", type=float, help="Seconds before no new trials")
@click.option("--output", "-o", type=click.Path(dir_okay=False), help="CSV path")
@click.option("--trace/--no-trace", default=None, help="Write a run trace per trial")
@handle_errors
def experiment(config_path, **options):
    """Run repeated trials and append one CSV row per trial."""
    from .output.report import summarize_results

    config = load_config(config_path, **options)
    done = {row.seed for row in read_results(config.output)}
    pending = [seed for seed in config.seed_list() if seed not in done]
    console.print(
        f"\n[bold]{config.task.concept_class.value}[/bold] k={config.task.k} d={config.task.d} "
        f"ε={config.task.epsilon} α={config.task.alpha}, n={config.resolved_n():,}, "
        f"{len(pending)} of {len(config.seed_list())} trials pending\n"
    )

    failures = 0
    with Progress(
        SpinnerColumn(),
        TextColumn("[progress.description]{task.description}"),
        BarColumn(),
        MofNCompleteColumn(),
        console=console,
    ) as progress:
        bar = progress.add_task("Running trials...", total=len(pending))

        def advance(result):
            nonlocal failures
            failures += result is None
            progress.advance(bar)

        run_experiment(config, on_trial=advance)

    rows = read_results(config.output)
    summary = summarize_results(rows, config.task.alpha)
    table = Table(title="Experiment", show_header=True, header_style="bold magenta")
    table.add_column("Measure", style="cyan")
    table.add_column("Value", justify="right")
    table.add_row("rows", f"{summary['trials']:,}")
    if rows:
        table.add_row("mean training error", f"{summary['mean_train_error']:.4f}")
        table.add_row("mean held-out error", f"{summary['mean_heldout_error']:.4f}")
        table.add_row("held-out error ≤ α", f"{summary['within_alpha']} / {summary['trials']}")
    if failures:
        table.add_row("[red]failed trials[/red]", str(failures))
    console.print(table)
    console.print(f"[dim]Results saved to: {config.output}[/dim]")


def _format_value(value: Any) -> str:
    return f"{value:.4g}" if isinstance(value, float) else str(value)


@main.command()
@click.option("--suite", "suites", multiple=True, type=click.Choice(list(SUITES)),
              help="Suite to run (repeatable; default all)")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--scale", type=float, default=1.0, show_default=True,
              help="Multiplier for instance and draw counts")
@click.option("--output", "-o", type=click.Path(dir_okay=False), help="Report JSON path")
@handle_errors
def verify(suites, seed, scale, output):
    """Check invariants against the brute-force oracles."""
    names = list(suites) or list(SUITES)
    with Progress(
        SpinnerColumn(),
        TextColumn("[progress.description]{task.description}"),
        console=console,
    ) as progress:
        progress.add_task(f"Running {', '.join(names)}...", total=None)
        reports = run_suites(names, seed=seed, scale=scale)

    table = Table(title="Verification", show_header=True, header_style="bold magenta")
    table.add_column("Check", style="cyan")
    table.add_column("Instance")
    table.add_column("Expected", justify="right")
    table.add_column("Observed", justify="right")
    table.add_column("Verdict")
    for report in reports:
        verdict = "[green]pass[/green]" if report.passed else "[red]FAIL[/red]"
        table.add_row(
            report.test_name,
            report.instance,
            _format_value(report.expected),
            _format_value(report.observed),
            verdict,
        )
    console.print(table)

    if output:
        metadata = {"version": __version__, "seed": seed, "scale": scale, "suites": names}
        _write_json(
            {"metadata": metadata, "reports": [report.to_dict() for report in reports]},
            Path(output),
        )

    failed = [report.test_name for report in reports if not report.passed]
    if failed:
        raise VerificationError(f"{len(failed)} of {len(reports)} checks failed: {failed}")
    console.print(f"[green]✓[/green] all {len(reports)} checks passed")


@main.command("arrangement-dump")
@click.option("--sample", "sample_path", type=click.Path(exists=True, dir_okay=False),
              required=True, help="Grid sample JSONL")
@click.option("--output", "-o", type=click.Path(dir_okay=False),
              help="Faces JSON path (default: next to the sample)")
@click.option("--plot", type=click.Path(dir_okay=False), help="Also write an HTML plot")
@click.option("--mode", type=click.Choice([m.value for m in Mode]),
              help="Colour the plot by candidate quality in this mode")
@click.option("--threshold", type=float, default=0.0, show_default=True,
              help="Threshold b_j used for quality colouring")
@click.option("-k", type=int, default=1, show_default=True)
@handle_errors
def arrangement_dump(sample_path, output, plot, mode, threshold, k):
    """Dump the dual arrangement of a grid sample."""
    sample = read_sample_jsonl(Path(sample_path))
    arr = build_arrangement(sample)

    json_path = Path(output) if output else _sibling(Path(sample_path), "arrangement")
    metadata = {"version": __version__, "sample": Path(sample_path).name}
    _write_json({"metadata": metadata, "arrangement": arrangement_to_dict(arr)}, json_path)
    console.print(
        f"[green]✓[/green] {len(arr.faces):,} faces, {len(arr.lines):,} lines "
        f"(bound {arr.face_count_bound():,}) → {json_path}"
    )

    if plot:
        from .output.report import generate_arrangement_html

        gq = GeometricQuality(Mode(mode), threshold, k, sample) if mode else None
        plot_path = generate_arrangement_html(arr, Path(plot), gq)
        console.print(f"[green]✓[/green] plot → {plot_path}")


@main.command()
@click.argument("csv_path", type=click.Path(exists=True, dir_okay=False))
@click.option("--output", "-o", type=click.Path(dir_okay=False),
              help="HTML path (default: next to the CSV)")
@handle_errors
def report(csv_path, output):
    """Render an experiment CSV as an HTML report."""
    from .output.report import generate_html_report

    source = Path(csv_path)
    html_path = Path(output) if output else source.with_suffix(".html")
    with Progress(
        SpinnerColumn(),
        TextColumn("[progress.description]{task.description}"),
        console=console,
    ) as progress:
        progress.add_task("Rendering report...", total=None)
        generate_html_report(source, html_path)
    console.print(f"[green]✓[/green] HTML report: {html_path}")


if __name__ == "__main__":
    main()

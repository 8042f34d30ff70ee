"""HTML report generation for experiment results."""

from __future__ import annotations

import json
import statistics
from pathlib import Path
from typing import Any

import plotly.graph_objects as go
from jinja2 import Environment, FileSystemLoader, select_autoescape

from ..errors import ParameterError
from ..geometry.arrangement import Arrangement
from ..harness.experiment import TrialResult, meta_path, read_results
from ..selectors.quality import GeometricQuality
from ..viz.charts import arrangement_figure, generate_all_charts


def get_template_env() -> Environment:
    """Get Jinja2 environment for templates.

    Returns:
        Jinja2 Environment configured for templates
    """
    template_dir = Path(__file__).parent / "templates"
    env = Environment(
        loader=FileSystemLoader(str(template_dir)),
        autoescape=select_autoescape(['html', 'xml'])
    )
    return env


def charts_to_json(charts: dict[str, Any]) -> str:
    """Convert Plotly charts to JSON for embedding in HTML.

    Args:
        charts: Dictionary of chart name to Plotly figure

    Returns:
        JSON string of chart data
    """
    chart_data = {}
    for name, fig in charts.items():
        chart_data[name] = {
            'data': fig.to_dict()['data'],
            'layout': fig.to_dict()['layout'],
        }
    return json.dumps(chart_data, default=_json_default)


def _json_default(value: Any) -> Any:
    if hasattr(value, 'tolist'):
        return value.tolist()
    raise TypeError(f"cannot serialise {type(value).__name__}")


def summarize_results(results: list[TrialResult], alpha: float | None = None) -> dict[str, Any]:
    """Aggregate numbers shown in the report's summary table."""
    heldout = [r.heldout_error for r in results]
    train = [r.train_error for r in results]
    summary: dict[str, Any] = {
        'trials': len(results),
        'mean_train_error': statistics.fmean(train) if train else None,
        'mean_heldout_error': statistics.fmean(heldout) if heldout else None,
        'median_heldout_error': statistics.median(heldout) if heldout else None,
        'max_heldout_error': max(heldout) if heldout else None,
        'zero_train_error': sum(1 for e in train if e == 0),
        'mean_wall_time': statistics.fmean(r.wall_time for r in results) if results else None,
    }
    if alpha is not None:
        summary['alpha'] = alpha
        summary['within_alpha'] = sum(1 for e in heldout if e <= alpha)
    return summary


def generate_html_report(csv_path: Path, output_path: Path) -> Path:
    """Render the experiment CSV at ``csv_path`` (and its sidecar metadata) as HTML.

    Args:
        csv_path: Experiment CSV written by ``run_experiment``
        output_path: Path to save HTML file

    Returns:
        Path to generated HTML file
    """
    if not csv_path.exists():
        raise ParameterError(f"{csv_path}: no such results file")
    results = read_results(csv_path)

    sidecar = meta_path(csv_path)
    meta: dict[str, Any] = {}
    if sidecar.exists():
        meta = json.loads(sidecar.read_text(encoding='utf-8'))
    config = meta.get('config', {})
    task = config.get('task', {})
    alpha = task.get('alpha')
    if alpha is None and results:
        alpha = results[0].alpha

    charts = generate_all_charts(results, alpha)
    context = {
        'title': f"{task.get('concept_class', 'Experiment')} results",
        'source': csv_path.name,
        'metadata': meta.get('metadata', {}),
        'task': task,
        'summary': summarize_results(results, alpha),
        'rows': [r.to_dict() for r in results],
        'charts_json': charts_to_json(charts),
    }

    env = get_template_env()
    template = env.get_template('report.html')
    html = template.render(**context)

    output_path.parent.mkdir(parents=True, exist_ok=True)
    output_path.write_text(html, encoding='utf-8')
    return output_path


def write_figure_html(fig: go.Figure, output_path: Path) -> Path:
    output_path.parent.mkdir(parents=True, exist_ok=True)
    fig.write_html(str(output_path), include_plotlyjs='cdn')
    return output_path


def generate_arrangement_html(
    arr: Arrangement, output_path: Path, gq: GeometricQuality | None = None
) -> Path:
    """Write the arrangement plot as a standalone HTML page."""
    return write_figure_html(arrangement_figure(arr, gq), output_path)

"""Output generation modules."""

from .report import (
    charts_to_json,
    generate_arrangement_html,
    generate_html_report,
    summarize_results,
    write_figure_html,
)

__all__ = [
    'charts_to_json',
    'generate_arrangement_html',
    'generate_html_report',
    'summarize_results',
    'write_figure_html',
]

"""Visualization modules."""

from .charts import (
    arrangement_figure,
    generate_all_charts,
    generate_error_by_trial_chart,
    generate_heldout_histogram,
    generate_wall_time_chart,
)

__all__ = [
    'arrangement_figure',
    'generate_all_charts',
    'generate_error_by_trial_chart',
    'generate_heldout_histogram',
    'generate_wall_time_chart',
]

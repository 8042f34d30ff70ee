"""Plotly figures for experiment reports and arrangement dumps."""

from __future__ import annotations

import plotly.graph_objects as go
from plotly.colors import sample_colorscale

from ..geometry.arrangement import Arrangement
from ..harness.experiment import TrialResult
from ..selectors.halfplane import candidate_scores
from ..selectors.quality import GeometricQuality


def generate_error_by_trial_chart(
    results: list[TrialResult], alpha: float | None = None
) -> go.Figure:
    """Grouped bars of training and held-out error per seed.

    Args:
        results: Trial rows
        alpha: Target accuracy, drawn as a reference line when given

    Returns:
        Plotly figure object
    """
    if not results:
        return go.Figure()

    seeds = [str(r.seed) for r in results]
    fig = go.Figure(data=[
        go.Bar(
            x=seeds,
            y=[r.train_error for r in results],
            name='training error',
            marker_color='rgb(55, 83, 109)',
            hovertemplate='seed %{x}<br>training error: %{y:.4f}<extra></extra>',
        ),
        go.Bar(
            x=seeds,
            y=[r.heldout_error for r in results],
            name='held-out error',
            marker_color='rgb(26, 118, 255)',
            hovertemplate='seed %{x}<br>held-out error: %{y:.4f}<extra></extra>',
        ),
    ])
    if alpha is not None:
        fig.add_hline(y=alpha, line_dash='dash', line_color='rgb(239, 85, 59)',
                      annotation_text=f'α = {alpha}')

    fig.update_layout(
        title='Error per Trial',
        xaxis_title='Seed',
        yaxis_title='Error',
        barmode='group',
        height=400,
    )
    return fig


def generate_heldout_histogram(results: list[TrialResult]) -> go.Figure:
    if not results:
        return go.Figure()

    fig = go.Figure(data=[
        go.Histogram(
            x=[r.heldout_error for r in results],
            nbinsx=20,
            marker_color='rgb(99, 110, 250)',
            hovertemplate='error %{x}<br>trials: %{y}<extra></extra>',
        )
    ])
    fig.update_layout(
        title='Held-out Error Distribution',
        xaxis_title='Held-out Error',
        yaxis_title='Trials',
        height=400,
        showlegend=False,
    )
    return fig


def generate_wall_time_chart(results: list[TrialResult]) -> go.Figure:
    if not results:
        return go.Figure()

    fig = go.Figure(data=[
        go.Bar(
            x=[str(r.seed) for r in results],
            y=[r.wall_time for r in results],
            marker_color='rgb(239, 85, 59)',
            hovertemplate='seed %{x}<br>%{y:.2f} s<extra></extra>',
        )
    ])
    fig.update_layout(
        title='Learner Wall Time',
        xaxis_title='Seed',
        yaxis_title='Seconds',
        height=400,
        showlegend=False,
    )
    return fig


def arrangement_figure(arr: Arrangement, gq: GeometricQuality | None = None) -> go.Figure:
    """Faces of the dual arrangement as filled polygons.

    Faces are coloured by the better of their two candidate scores when a
    scoring context is given, otherwise by how many examples they label 0.

    Args:
        arr: Arrangement to draw
        gq: Optional scoring context over the same sample

    Returns:
        Plotly figure object
    """
    if gq is not None:
        scores = candidate_scores(arr, gq).reshape(-1, 2).max(axis=1)
        values = [float(s) for s in scores]
        label = 'quality'
    else:
        values = [float(face.below_mask.bit_count()) for face in arr.faces]
        label = 'examples labelled 0'

    low, high = (min(values), max(values)) if values else (0.0, 0.0)
    span = high - low or 1.0
    colors = sample_colorscale('Viridis', [(v - low) / span for v in values])

    fig = go.Figure()
    for index, (face, value, color) in enumerate(zip(arr.faces, values, colors)):
        a = [float(p[0]) for p in face.vertices] + [float(face.vertices[0][0])]
        b = [float(p[1]) for p in face.vertices] + [float(face.vertices[0][1])]
        fig.add_trace(go.Scatter(
            x=a,
            y=b,
            fill='toself',
            fillcolor=color,
            mode='lines',
            line=dict(color='white', width=0.5),
            name=f'face {index}',
            hovertemplate=f'face {index}<br>{label}: {value:g}<br>mask 0x{face.below_mask:x}'
                          '<extra></extra>',
            showlegend=False,
        ))

    half = arr.grid.box_half_width
    fig.update_layout(
        title=f"Dual Arrangement: {len(arr.faces)} faces, {len(arr.lines)} lines, d = {arr.grid.d}",
        xaxis_title='slope a',
        yaxis_title='intercept b',
        xaxis=dict(range=[-half, half]),
        yaxis=dict(range=[-half, half], scaleanchor='x'),
        height=700,
    )
    return fig


def generate_all_charts(
    results: list[TrialResult], alpha: float | None = None
) -> dict[str, go.Figure]:
    """Generate all charts for the experiment report.

    Args:
        results: Trial rows
        alpha: Target accuracy of the experiment

    Returns:
        Dictionary mapping chart names to Plotly figures
    """
    charts = {}
    charts['errors'] = generate_error_by_trial_chart(results, alpha)
    charts['heldout'] = generate_heldout_histogram(results)
    charts['wall_time'] = generate_wall_time_chart(results)
    return charts

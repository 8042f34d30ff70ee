"""Tests for charts and HTML report generation."""

import csv
import json

import plotly.graph_objects as go
import pytest

from dp_cover.concepts import LabeledSample
from dp_cover.errors import ParameterError
from dp_cover.geometry import build_arrangement
from dp_cover.harness import CSV_COLUMNS, TrialResult
from dp_cover.harness.experiment import meta_path
from dp_cover.output.report import (
    charts_to_json,
    generate_arrangement_html,
    generate_html_report,
    summarize_results,
)
from dp_cover.selectors import GeometricQuality, Mode
from dp_cover.viz import (
    arrangement_figure,
    generate_all_charts,
    generate_error_by_trial_chart,
    generate_heldout_histogram,
    generate_wall_time_chart,
)


def _row(seed, train, heldout):
    return TrialResult(
        seed=seed,
        n=100,
        epsilon=1.0,
        delta=1e-6,
        alpha=0.25,
        k=2,
        d=8,
        train_error=train,
        heldout_error=heldout,
        wall_time=0.5 + seed,
        iterations=12,
    )


@pytest.fixture
def results() -> list[TrialResult]:
    """Three trial rows, two within α."""
    return [_row(0, 0.0, 0.1), _row(1, 0.05, 0.3), _row(2, 0.0, 0.2)]


@pytest.fixture
def results_csv(tmp_path, results):
    path = tmp_path / "runs.csv"
    with open(path, "w", newline="", encoding="utf-8") as f:
        writer = csv.DictWriter(f, fieldnames=CSV_COLUMNS)
        writer.writeheader()
        for row in results:
            writer.writerow(row.to_dict())
    return path


@pytest.fixture
def small_arrangement():
    sample = LabeledSample.grid_sample([(1, 2), (3, 1), (2, 4)], [0, 1, 0], 4)
    return sample, build_arrangement(sample)


class TestSummary:
    """Tests for summary aggregation."""

    def test_summary(self, results):
        summary = summarize_results(results, alpha=0.25)
        assert summary["trials"] == 3
        assert summary["mean_heldout_error"] == pytest.approx(0.2)
        assert summary["median_heldout_error"] == pytest.approx(0.2)
        assert summary["max_heldout_error"] == pytest.approx(0.3)
        assert summary["zero_train_error"] == 2
        assert summary["within_alpha"] == 2
        assert summary["mean_wall_time"] == pytest.approx(1.5)

    def test_empty(self):
        summary = summarize_results([])
        assert summary["trials"] == 0
        assert summary["mean_heldout_error"] is None
        assert "within_alpha" not in summary


class TestCharts:
    """Test chart generation functions."""

    def test_error_by_trial(self, results):
        fig = generate_error_by_trial_chart(results, alpha=0.25)
        assert len(fig.data) == 2
        assert fig.layout.title.text == "Error per Trial"
        assert len(fig.layout.shapes) == 1

    def test_heldout_histogram(self, results):
        fig = generate_heldout_histogram(results)
        assert len(fig.data) == 1
        assert "histogram" in fig.data[0].type

    def test_wall_time(self, results):
        fig = generate_wall_time_chart(results)
        assert list(fig.data[0].y) == [0.5, 1.5, 2.5]

    def test_empty_results(self):
        for fig in generate_all_charts([]).values():
            assert isinstance(fig, go.Figure)
            assert len(fig.data) == 0

    def test_all_charts_to_json(self, results):
        charts = generate_all_charts(results, 0.25)
        assert set(charts) == {"errors", "heldout", "wall_time"}
        data = json.loads(charts_to_json(charts))
        assert set(data) == set(charts)
        assert data["errors"]["layout"]["title"]["text"] == "Error per Trial"

    def test_arrangement_figure(self, small_arrangement):
        sample, arr = small_arrangement
        fig = arrangement_figure(arr)
        assert len(fig.data) == len(arr.faces)
        assert str(arr.grid.d) in fig.layout.title.text
        scored = arrangement_figure(arr, GeometricQuality(Mode.AND, 1.0, 1, sample))
        assert "quality" in scored.data[0].hovertemplate


class TestOutput:
    """Test HTML report generation."""

    def test_generate_html_report(self, results_csv, tmp_path):
        output_path = tmp_path / "report" / "runs.html"
        assert generate_html_report(results_csv, output_path) == output_path

        html = output_path.read_text(encoding="utf-8")
        assert "<!DOCTYPE html>" in html
        assert "Plotly" in html
        assert "Experiment results" in html
        assert "0.3000" in html

    def test_report_uses_metadata(self, results_csv, tmp_path):
        meta = {
            "metadata": {"version": "0.1.0", "config_sha256": "f" * 64, "seeds": [0, 1, 2]},
            "config": {"task": {"concept_class": "CONJ", "alpha": 0.25}},
        }
        meta_path(results_csv).write_text(json.dumps(meta), encoding="utf-8")
        html = generate_html_report(results_csv, tmp_path / "r.html").read_text(encoding="utf-8")
        assert "CONJ results" in html
        assert "f" * 12 in html

    def test_header_only_csv(self, tmp_path):
        path = tmp_path / "empty.csv"
        path.write_text(",".join(CSV_COLUMNS) + "\n", encoding="utf-8")
        assert generate_html_report(path, tmp_path / "empty.html").exists()

    def test_missing_csv(self, tmp_path):
        with pytest.raises(ParameterError):
            generate_html_report(tmp_path / "absent.csv", tmp_path / "x.html")

    def test_arrangement_html(self, small_arrangement, tmp_path):
        _, arr = small_arrangement
        path = generate_arrangement_html(arr, tmp_path / "arr.html")
        assert path.exists()
        assert "plotly" in path.read_text(encoding="utf-8").lower()

"""Tests for the command-line interface."""

import json

import pytest
from click.testing import CliRunner

from dp_cover import __version__
from dp_cover.cli import main
from dp_cover.concepts import LabeledSample, read_sample_jsonl, write_sample_jsonl
from dp_cover.harness import read_results
from dp_cover.oracles import OracleReport

TASK_ARGS = ["--class", "CONJ", "-k", "2", "--alpha", "0.25", "--beta", "0.1", "--epsilon", "1"]


@pytest.fixture
def runner():
    return CliRunner()


@pytest.fixture
def sample_file(runner, tmp_path):
    path = tmp_path / "s.jsonl"
    result = runner.invoke(
        main, ["gen-data", *TASK_ARGS, "-d", "8", "--n", "50", "--seed", "3", "-o", str(path)]
    )
    assert result.exit_code == 0, result.output
    return path


class TestDataAndLearning:
    """Tests for gen-data, learn and eval."""

    def test_version(self, runner):
        result = runner.invoke(main, ["--version"])
        assert result.exit_code == 0
        assert __version__ in result.output

    def test_gen_data(self, sample_file):
        sample = read_sample_jsonl(sample_file)
        assert len(sample) == 50
        assert sample.d == 8
        target = json.loads(sample_file.with_name("s.target.json").read_text(encoding="utf-8"))
        assert target["target"]["type"] == "conjunction"
        assert target["metadata"]["seed"] == 3

    def test_learn(self, runner, sample_file):
        result = runner.invoke(main, ["learn", "--sample", str(sample_file), *TASK_ARGS])
        assert result.exit_code == 0, result.output
        hypothesis = json.loads(
            sample_file.with_name("s.hypothesis.json").read_text(encoding="utf-8")
        )
        assert hypothesis["hypothesis"]["type"] == "and"
        trace = json.loads(sample_file.with_name("s.trace.json").read_text(encoding="utf-8"))
        assert len(trace["trace"]["iterations"]) == 12

    def test_learn_without_trace(self, runner, sample_file, tmp_path):
        out = tmp_path / "h.json"
        result = runner.invoke(
            main,
            ["learn", "--sample", str(sample_file), *TASK_ARGS, "--no-trace", "-o", str(out)],
        )
        assert result.exit_code == 0, result.output
        assert out.exists()
        assert not sample_file.with_name("s.trace.json").exists()

    def test_learn_wrong_class_for_sample(self, runner, sample_file):
        args = ["learn", "--sample", str(sample_file), *TASK_ARGS]
        args[args.index("CONJ")] = "CONVEX_KGON"
        result = runner.invoke(main, args)
        assert result.exit_code == 2

    def test_missing_sample_file(self, runner, tmp_path):
        result = runner.invoke(main, ["learn", "--sample", str(tmp_path / "nope.jsonl")])
        assert result.exit_code == 2

    def test_invalid_task(self, runner, tmp_path):
        result = runner.invoke(
            main, ["gen-data", *TASK_ARGS, "-d", "0", "--n", "5", "-o", str(tmp_path / "x.jsonl")]
        )
        assert result.exit_code == 2
        assert "Error" in result.output

    def test_eval(self, runner, sample_file, tmp_path):
        runner.invoke(main, ["learn", "--sample", str(sample_file), *TASK_ARGS])
        out = tmp_path / "eval.json"
        result = runner.invoke(
            main,
            [
                "eval",
                "--hypothesis", str(sample_file.with_name("s.hypothesis.json")),
                "--sample", str(sample_file),
                "--target", str(sample_file.with_name("s.target.json")),
                "--heldout", "500",
                "-o", str(out),
            ],
        )
        assert result.exit_code == 0, result.output
        payload = json.loads(out.read_text(encoding="utf-8"))
        assert 0.0 <= payload["train_error"] <= 1.0
        assert 0.0 <= payload["heldout_error"] <= 1.0
        assert payload["heldout_points"] == 500

    def test_eval_needs_sample_or_target(self, runner, sample_file):
        runner.invoke(main, ["learn", "--sample", str(sample_file), *TASK_ARGS])
        hypothesis = sample_file.with_name("s.hypothesis.json")
        result = runner.invoke(main, ["eval", "--hypothesis", str(hypothesis)])
        assert result.exit_code == 2


class TestExperimentAndReport:
    """Tests for experiment, report and arrangement-dump."""

    def test_experiment_then_report(self, runner, tmp_path):
        csv_path = tmp_path / "runs.csv"
        result = runner.invoke(
            main,
            [
                "experiment", *TASK_ARGS, "-d", "8",
                "--trials", "2", "--n", "40", "--heldout", "100", "-o", str(csv_path),
            ],
        )
        assert result.exit_code == 0, result.output
        assert [row.seed for row in read_results(csv_path)] == [0, 1]

        result = runner.invoke(main, ["report", str(csv_path)])
        assert result.exit_code == 0, result.output
        assert csv_path.with_suffix(".html").exists()

    def test_experiment_over_triple_cap_exits_3(self, runner, tmp_path):
        csv_path = tmp_path / "union.csv"
        result = runner.invoke(
            main,
            [
                "experiment", "--class", "K_UNION_GON", "-k", "3", "-d", "8",
                "--alpha", "0.25", "--beta", "0.1", "--epsilon", "1", "--triple-cap", "10",
                "--trials", "2", "--n", "10", "--heldout", "50", "-o", str(csv_path),
            ],
        )
        assert result.exit_code == 3, result.output
        assert "exceeds the cap" in result.output
        assert read_results(csv_path) == []

    def test_arrangement_dump(self, runner, tmp_path):
        sample = LabeledSample.grid_sample([(1, 2), (3, 1), (2, 4)], [0, 1, 0], 4)
        path = write_sample_jsonl(sample, tmp_path / "g.jsonl")
        plot = tmp_path / "g.html"
        result = runner.invoke(
            main,
            ["arrangement-dump", "--sample", str(path), "--plot", str(plot), "--mode", "and"],
        )
        assert result.exit_code == 0, result.output
        dump = json.loads((tmp_path / "g.arrangement.json").read_text(encoding="utf-8"))
        assert dump["arrangement"]["d"] == 4
        assert len(dump["arrangement"]["lines"]) == 3
        assert plot.exists()


class TestVerifyCommand:
    """Tests for the verify command's exit codes."""

    def test_passing_suite(self, runner, tmp_path):
        out = tmp_path / "verify.json"
        result = runner.invoke(
            main, ["verify", "--suite", "selectors", "--scale", "0.1", "-o", str(out)]
        )
        assert result.exit_code == 0, result.output
        payload = json.loads(out.read_text(encoding="utf-8"))
        assert payload["metadata"]["suites"] == ["selectors"]
        assert all(report["verdict"] == "pass" for report in payload["reports"])

    def test_failing_check_exits_4(self, runner, monkeypatch):
        def failing(names, seed, scale):
            return [OracleReport.check("forced", "stub", 0, 1)]

        monkeypatch.setattr("dp_cover.cli.run_suites", failing)
        result = runner.invoke(main, ["verify", "--suite", "selectors"])
        assert result.exit_code == 4

    def test_unknown_suite(self, runner):
        assert runner.invoke(main, ["verify", "--suite", "nope"]).exit_code == 2

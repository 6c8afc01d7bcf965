"""CLI behavior: JSON summaries, exit codes, idempotent outputs."""

import json
import subprocess
import sys

import pytest

from discoursecast.cli import main

CLI = [sys.executable, "-m", "discoursecast.cli"]


def run_cli(*args):
    return subprocess.run(CLI + list(args), capture_output=True, text=True)


class TestSynth:
    def test_seeded_runs_are_byte_identical(self, tmp_path):
        a, b = tmp_path / "a", tmp_path / "b"
        r1 = run_cli("synth", "--out", str(a), "--days", "40", "--seed", "7")
        r2 = run_cli("synth", "--out", str(b), "--days", "40", "--seed", "7")
        assert r1.returncode == 0 and r2.returncode == 0
        for name in ("corpus.jsonl", "events.csv", "truth.json", "config.json"):
            assert (a / name).read_bytes() == (b / name).read_bytes(), name

    def test_summary_is_json(self, tmp_path):
        result = run_cli("synth", "--out", str(tmp_path / "s"), "--days", "10", "--seed", "1")
        summary = json.loads(result.stdout)
        assert summary["days"] == 10
        assert summary["documents"] > 0

    def test_different_seed_differs(self, tmp_path):
        a, b = tmp_path / "a", tmp_path / "b"
        run_cli("synth", "--out", str(a), "--days", "20", "--seed", "1")
        run_cli("synth", "--out", str(b), "--days", "20", "--seed", "2")
        assert (a / "corpus.jsonl").read_bytes() != (b / "corpus.jsonl").read_bytes()


class TestExitCodes:
    def test_unknown_command_is_usage_error(self):
        assert run_cli("frobnicate").returncode == 2

    def test_unknown_flag_is_usage_error(self, tmp_path):
        assert run_cli("synth", "--out", str(tmp_path), "--bogus").returncode == 2

    def test_missing_input_file(self, tmp_path):
        synth = tmp_path / "s"
        run_cli("synth", "--out", str(synth), "--days", "10", "--seed", "1")
        result = run_cli(
            "ingest", "--config", str(synth / "config.json"),
            "--data-dir", str(tmp_path / "d"), "--input", str(tmp_path / "nope.jsonl"),
        )
        assert result.returncode == 3
        assert "error" in json.loads(result.stderr)

    def test_malformed_config(self, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text("{not json")
        result = run_cli("layer", "--config", str(bad), "--data-dir", str(tmp_path))
        assert result.returncode == 4

    def test_stage_out_of_order(self, tmp_path):
        synth = tmp_path / "s"
        run_cli("synth", "--out", str(synth), "--days", "10", "--seed", "1")
        result = run_cli("layer", "--config", str(synth / "config.json"),
                         "--data-dir", str(tmp_path / "d"))
        assert result.returncode == 4

    def test_insufficient_span_for_training(self, tmp_path):
        synth = tmp_path / "s"
        run_cli("synth", "--out", str(synth), "--days", "20", "--seed", "1")
        config = str(synth / "config.json")
        data = str(tmp_path / "d")
        assert run_cli("ingest", "--config", config, "--data-dir", data,
                       "--input", str(synth / "corpus.jsonl"),
                       "--events", str(synth / "events.csv")).returncode == 0
        assert run_cli("layer", "--config", config, "--data-dir", data).returncode == 0
        assert run_cli("featurize", "--config", config, "--data-dir", data).returncode == 0
        result = run_cli("train", "--config", config, "--data-dir", data)
        assert result.returncode == 6


class TestInProcessEntry:
    def test_main_returns_zero_on_success(self, tmp_path, capsys):
        code = main(["synth", "--out", str(tmp_path / "x"), "--days", "8", "--seed", "2"])
        assert code == 0
        summary = json.loads(capsys.readouterr().out)
        assert summary["seed"] == 2


class TestOverrideFlags:
    @pytest.fixture(scope="class")
    def featurized(self, tmp_path_factory):
        root = tmp_path_factory.mktemp("ov")
        synth = root / "s"
        data = root / "d"
        run_cli("synth", "--out", str(synth), "--days", "80", "--seed", "3")
        config = str(synth / "config.json")
        run_cli("ingest", "--config", config, "--data-dir", str(data),
                "--input", str(synth / "corpus.jsonl"), "--events", str(synth / "events.csv"))
        run_cli("layer", "--config", config, "--data-dir", str(data))
        run_cli("featurize", "--config", config, "--data-dir", str(data))
        return config, str(data)

    def test_horizon_override_shapes_training(self, featurized):
        config, data = featurized
        result = run_cli("train", "--config", config, "--data-dir", data,
                         "--epochs", "2", "--horizon", "3")
        assert result.returncode == 0, result.stderr
        report = json.loads(result.stdout)
        # 80-day span: windows = days - (context + horizon) + 1
        assert report["windows"] == 80 - (28 + 3) + 1

    def test_window_override_flows_to_evaluation(self, featurized):
        config, data = featurized
        result = run_cli("evaluate", "--config", config, "--data-dir", data,
                         "--delta", "1", "--window", "14")
        assert result.returncode == 0, result.stderr

    def test_invalid_window_rejected(self, featurized):
        config, data = featurized
        result = run_cli("evaluate", "--config", config, "--data-dir", data, "--window", "0")
        assert result.returncode == 4

"""Command-line entry points and their exit codes (0 ok, 1 config/usage,
2 data, 3 estimation)."""

from __future__ import annotations

import json
import shutil
import subprocess
import sys
from pathlib import Path

from conftest import CORPUS_CONFIG, CORPUS_DIR


def writelab_cli(*args: str) -> subprocess.CompletedProcess:
    return subprocess.run(
        [sys.executable, "-m", "writelab.cli", *args],
        capture_output=True,
        text=True,
        timeout=300,
    )


def reduced_config(tmp_path: Path, **overrides) -> Path:
    body = {
        "seed": 11,
        "session_dir": str(CORPUS_DIR / "sessions"),
        "metadata_csv": str(CORPUS_DIR / "metadata.csv"),
        "treatments": ["T1"],
        "outcomes": ["Y1"],
        "bootstrap": {"replicates": 100},
        "refutation": {"simulations": 50},
        "trends": {"theta": 0.6, "min_size": 3},
    }
    body.update(overrides)
    path = tmp_path / "config.json"
    path.write_text(json.dumps(body), encoding="utf-8")
    return path


class TestUsage:
    def test_help_exits_zero_and_lists_subcommands(self):
        proc = writelab_cli("--help")
        assert proc.returncode == 0
        for name in ("run", "ingest", "metrics", "estimate", "refute", "explain", "report"):
            assert name in proc.stdout

    def test_missing_config_option_is_usage_error(self):
        proc = writelab_cli("report")
        assert proc.returncode == 1
        assert "Missing option" in proc.stderr

    def test_unknown_subcommand(self):
        proc = writelab_cli("transmogrify")
        assert proc.returncode == 1


class TestExitCodes:
    def test_full_run_exits_zero(self, tmp_path):
        config = reduced_config(tmp_path)
        proc = writelab_cli("run", "--config", str(config), "--out", str(tmp_path / "out"))
        assert proc.returncode == 0, proc.stderr
        assert "1 pairs" in proc.stderr
        manifest = json.loads((tmp_path / "out" / "manifest.json").read_text())
        assert manifest["sessions"] == 12

    def test_report_from_cached_outputs_exits_zero(self, corpus_run, tmp_path):
        source, _ = corpus_run
        out = tmp_path / "out"
        shutil.copytree(source, out)
        before = (out / "trend_table.csv").read_bytes()
        proc = writelab_cli("report", "--config", str(CORPUS_CONFIG), "--out", str(out))
        assert proc.returncode == 0, proc.stderr
        assert "report:" in proc.stderr
        assert (out / "trend_table.csv").read_bytes() == before

    def test_config_error_exits_one(self, tmp_path):
        config = reduced_config(tmp_path, mystery=True)
        proc = writelab_cli("run", "--config", str(config))
        assert proc.returncode == 1
        assert "error:" in proc.stderr
        assert "mystery" in proc.stderr

    def test_missing_inputs_exit_two(self, tmp_path):
        config = reduced_config(tmp_path)
        proc = writelab_cli(
            "estimate", "--config", str(config), "--out", str(tmp_path / "empty")
        )
        assert proc.returncode == 2
        assert "run `writelab ingest` first" in proc.stderr

    def test_impossible_identification_exits_three(self, corpus_run, tmp_path):
        source, _ = corpus_run
        out = tmp_path / "out"
        shutil.copytree(source, out)
        graph = tmp_path / "graph.txt"
        graph.write_text("Y -> T\n", encoding="utf-8")
        config = reduced_config(tmp_path, graph_file=str(graph))
        proc = writelab_cli("estimate", "--config", str(config), "--out", str(out))
        assert proc.returncode == 3
        assert "no valid back-door adjustment set" in proc.stderr

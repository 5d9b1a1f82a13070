"""End-to-end tests for the poolal CLI."""

import json

import pytest
from typer.testing import CliRunner

from poolal.cli.main import app
from poolal.data.embeddings import load_embedding_csv

runner = CliRunner()

TINY_RUN = {
    "strategy": {"batch_k": 4, "density_sample": 50},
    "train": {"epochs": 3, "batch_size": 8},
    "budget": 12,
    "seed_count": 6,
    "confidence_threshold": 0.9,
}
TINY_DATA = {"synthetic": {"class_count": 3, "feature_dim": 4, "per_class": 13, "rng_seed": 2}}


@pytest.fixture
def config_file(tmp_path):
    """A JSON config for a run that finishes in a moment."""
    path = tmp_path / "config.json"
    path.write_text(json.dumps({"run": TINY_RUN, "dataset": TINY_DATA}))
    return path


def _run(*args: str):
    return runner.invoke(app, ["--quiet", *args])


class TestGenData:
    """Tests for gen-data."""

    def test_missing_out(self):
        """--out is required."""
        assert _run("gen-data").exit_code == 2

    def test_writes_file_and_digest(self, tmp_path):
        """The CSV and its .sha256 are written; the digest is printed."""
        out = tmp_path / "emb.csv"
        result = _run("gen-data", "--out", str(out), "--classes", "3", "--dim", "4",
                      "--per-class", "10")
        assert result.exit_code == 0, result.output
        digest = load_embedding_csv(out).digest
        assert digest in result.output
        assert (tmp_path / "emb.csv.sha256").read_text() == f"{digest}  emb.csv\n"

    def test_identical_files(self, tmp_path):
        """Two invocations with the same arguments write identical bytes."""
        paths = [tmp_path / "a.csv", tmp_path / "b.csv"]
        for path in paths:
            assert _run("gen-data", "--out", str(path), "--per-class", "10").exit_code == 0
        assert paths[0].read_bytes() == paths[1].read_bytes()

    def test_default_row_count(self, tmp_path):
        """The default dataset is 10 classes x 600 rows under one header."""
        out = tmp_path / "reference.csv"
        assert _run("gen-data", "--out", str(out)).exit_code == 0
        lines = out.read_text().splitlines()
        assert len(lines) == 6_001
        assert lines[0].startswith("id,split,label[K=10],f0,")
        assert lines[0].endswith(",f31")

    def test_bad_spec(self, tmp_path):
        """Invalid generator parameters are configuration errors."""
        result = _run("gen-data", "--out", str(tmp_path / "x.csv"), "--classes", "1")
        assert result.exit_code == 2


class TestRun:
    """Tests for run."""

    def test_zero_budget(self, tmp_path, config_file):
        """--budget 0 reports only round 0 and exits 0."""
        out = tmp_path / "out"
        result = _run("run", "--config", str(config_file), "--budget", "0", "--out-dir", str(out))
        assert result.exit_code == 0, result.output
        assert "oracle_spent=0" in result.output
        assert len((out / "report.csv").read_text().splitlines()) == 2

    def test_artifacts(self, tmp_path, config_file):
        """A run writes reports, head, snapshot, audit and optional score dumps."""
        out = tmp_path / "out"
        result = _run(
            "run", "--config", str(config_file), "--out-dir", str(out), "--dump-scores"
        )
        assert result.exit_code == 0, result.output
        for name in ("report.json", "report.csv", "head.json", "snapshot.json",
                     "pseudo_audit.csv"):
            assert (out / name).exists(), name
        assert (out / "scores" / "round_0000.csv").exists()
        report = json.loads((out / "report.json").read_text())
        assert report["summary"]["oracle_spent"] == 12

    def test_same_seed_same_bytes(self, tmp_path, config_file):
        """Two runs with --seed 7 produce byte-identical reports."""
        outs = [tmp_path / "a", tmp_path / "b"]
        for out in outs:
            result = _run("run", "--config", str(config_file), "--seed", "7", "--out-dir", str(out))
            assert result.exit_code == 0, result.output
        for name in ("report.json", "report.csv", "head.json"):
            assert (outs[0] / name).read_bytes() == (outs[1] / name).read_bytes()

    def test_flags_override_file(self, tmp_path, config_file):
        """Command-line flags win over the config file."""
        out = tmp_path / "out"
        result = _run(
            "run", "--config", str(config_file), "--no-pseudo", "--selector", "random",
            "--out-dir", str(out),
        )
        assert result.exit_code == 0, result.output
        report = json.loads((out / "report.json").read_text())
        assert report["strategy"] == "random"
        assert not (out / "pseudo_audit.csv").exists()

    def test_data_flag(self, tmp_path, config_file):
        """--data replaces the configured dataset."""
        data = tmp_path / "emb.csv"
        _run("gen-data", "--out", str(data), "--classes", "3", "--dim", "4", "--per-class", "13")
        out = tmp_path / "out"
        result = _run("run", "--config", str(config_file), "--data", str(data),
                      "--out-dir", str(out))
        assert result.exit_code == 0, result.output
        report = json.loads((out / "report.json").read_text())
        assert report["dataset_digest"] == load_embedding_csv(data).digest

    def test_resume_from_final_snapshot(self, tmp_path, config_file):
        """Resuming a finished run reproduces its report."""
        out = tmp_path / "out"
        assert _run("run", "--config", str(config_file), "--out-dir", str(out)).exit_code == 0
        first = (out / "report.json").read_bytes()
        result = _run(
            "run", "--config", str(config_file), "--out-dir", str(out),
            "--resume", str(out / "snapshot.json"),
        )
        assert result.exit_code == 0, result.output
        assert (out / "report.json").read_bytes() == first

    @pytest.mark.parametrize(
        "args",
        [
            ["--budget", "2"],
            ["--seed-count", "1"],
            ["--tau", "0"],
            ["--noise", "1.5"],
        ],
    )
    def test_configuration_errors(self, tmp_path, config_file, args):
        """Invalid settings exit 2."""
        result = _run("run", "--config", str(config_file), "--out-dir", str(tmp_path), *args)
        assert result.exit_code == 2

    def test_unreadable_config(self, tmp_path):
        """Missing or malformed config files exit 2."""
        assert _run("run", "--config", str(tmp_path / "absent.json")).exit_code == 2
        bad = tmp_path / "bad.json"
        bad.write_text("{not json")
        assert _run("run", "--config", str(bad)).exit_code == 2

    def test_unknown_config_key(self, tmp_path):
        """Typos in the config file are rejected."""
        path = tmp_path / "config.json"
        path.write_text(json.dumps({"run": {**TINY_RUN, "budgett": 3}, "dataset": TINY_DATA}))
        assert _run("run", "--config", str(path), "--out-dir", str(tmp_path)).exit_code == 2

    def test_malformed_data_is_runtime_error(self, tmp_path, config_file):
        """A broken embedding file exits 1."""
        data = tmp_path / "bad.csv"
        data.write_text("id,split,label[K=2],f0\n0,train,1\n")
        result = _run("run", "--config", str(config_file), "--data", str(data),
                      "--out-dir", str(tmp_path))
        assert result.exit_code == 1

    def test_missing_data_is_runtime_error(self, tmp_path, config_file):
        """An unreadable embedding file exits 1."""
        result = _run("run", "--config", str(config_file), "--data", str(tmp_path / "nope.csv"),
                      "--out-dir", str(tmp_path))
        assert result.exit_code == 1


class TestCompare:
    """Tests for compare."""

    def test_writes_curves(self, tmp_path, config_file):
        """Each strategy gets a curve file; summary.csv covers them all."""
        out = tmp_path / "cmp"
        result = _run(
            "compare", "--strategies", "random,hybrid+budget", "--seeds", "0,1",
            "--config", str(config_file), "--out-dir", str(out),
        )
        assert result.exit_code == 0, result.output
        assert (out / "curve_random.csv").exists()
        assert (out / "curve_hybrid_budget.csv").exists()
        report = json.loads((out / "comparison.json").read_text())
        assert report["seeds"] == [0, 1]
        assert report["paired"][0]["baseline"] == "random"

    @pytest.mark.parametrize(
        "strategies",
        ["random", "random,random", "hybrid+budget,hybrid_budget", "random,magic"],
    )
    def test_bad_strategy_lists(self, tmp_path, config_file, strategies):
        """Single, duplicate or unknown strategies exit 2."""
        result = _run(
            "compare", "--strategies", strategies, "--config", str(config_file),
            "--out-dir", str(tmp_path),
        )
        assert result.exit_code == 2

    def test_bad_seed_list(self, tmp_path, config_file):
        """Seeds must be integers."""
        result = _run(
            "compare", "--strategies", "random,hybrid", "--seeds", "a,b",
            "--config", str(config_file),
        )
        assert result.exit_code == 2


class TestReport:
    """Tests for report."""

    def test_rebuilds_csv(self, tmp_path, config_file):
        """The CSV rebuilt from report.json matches the one run wrote."""
        out = tmp_path / "out"
        assert _run("run", "--config", str(config_file), "--out-dir", str(out)).exit_code == 0
        target = tmp_path / "again.csv"
        result = _run("report", str(out / "report.json"), "--out", str(target))
        assert result.exit_code == 0, result.output
        assert target.read_bytes() == (out / "report.csv").read_bytes()

    def test_missing_report(self, tmp_path):
        """A missing report exits 1."""
        assert _run("report", str(tmp_path / "report.json")).exit_code == 1

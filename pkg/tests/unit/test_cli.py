"""Tests for the hawkes-mml command line."""

import json

import numpy as np
import pandas as pd
import pytest

from hawkes_mml.cli import main
from hawkes_mml.config.constants import CRITERIA
from hawkes_mml.core.events import HawkesModel
from hawkes_mml.core.io import read_events, read_graph, read_model, write_model
from hawkes_mml.core.manifest import RunManifest


@pytest.fixture
def run_cli(config_dir):
    """Invoke main() against the shipped config directory."""

    def _run(*argv):
        return main(["--config-dir", str(config_dir), "--log-level", "WARNING", *argv])

    return _run


@pytest.fixture
def simulated(tmp_path, run_cli, cascade_model):
    """A simulated three-node cascade written by the simulate command."""
    write_model(cascade_model, tmp_path / "truth.json")
    out = tmp_path / "sim"
    code = run_cli(
        "simulate", "--model", str(tmp_path / "truth.json"),
        "--horizon", "120", "--seed", "5", "--out", str(out),
    )
    assert code == 0
    return out


# =============================================================================
# simulate / infer / score
# =============================================================================


def test_simulate_writes_outputs(simulated, cascade_model):
    assert (simulated / "events.csv").exists()
    assert read_model(simulated / "model.json") == cascade_model
    manifest = RunManifest.read(simulated)
    assert manifest.command == "simulate"
    assert manifest.seed == 5
    assert manifest.config["rng"] == "PCG64"
    data = read_events(simulated / "events.csv", horizon=120.0, dims=3)
    assert data.total_events > 0


def test_simulate_from_setting(tmp_path, run_cli, capsys):
    out = tmp_path / "sim"
    code = run_cli(
        "simulate", "--setting", "single-input", "--p", "4",
        "--horizon", "30", "--seed", "1", "--out", str(out),
    )
    assert code == 0
    assert read_model(out / "model.json").dims == 4
    assert len(capsys.readouterr().out.strip().splitlines()) == 4


def test_infer_and_score(tmp_path, simulated, run_cli, capsys):
    out = tmp_path / "inferred"
    code = run_cli(
        "infer", "--events", str(simulated / "events.csv"), "--horizon", "120",
        "--dims", "3", "--criterion", "bic", "--workers", "1", "--out", str(out),
    )
    assert code == 0
    graph = read_graph(out / "graph.json")
    assert graph.dims == 3
    diagnostics = pd.read_csv(out / "diagnostics.csv")
    assert len(diagnostics) == 3 * 8
    assert diagnostics["selected"].sum() == 3
    capsys.readouterr()

    code = run_cli(
        "score", "--predicted", str(out / "graph.json"),
        "--truth-model", str(simulated / "model.json"), "--json",
    )
    assert code == 0
    report = json.loads(capsys.readouterr().out)
    assert report["truth_count"] == 3
    assert 0.0 <= report["f1"] <= 1.0


def test_infer_is_independent_of_workers(tmp_path, simulated, run_cli):
    graphs = []
    for workers in ("1", "3"):
        out = tmp_path / f"w{workers}"
        code = run_cli(
            "infer", "--events", str(simulated / "events.csv"), "--horizon", "120",
            "--criterion", "mml-u", "--workers", workers, "--out", str(out),
        )
        assert code == 0
        graphs.append(read_graph(out / "graph.json"))
    assert graphs[0] == graphs[1]


# =============================================================================
# Exit codes
# =============================================================================


def test_unknown_criterion_is_usage_error(tmp_path, simulated, run_cli, capsys):
    code = run_cli(
        "infer", "--events", str(simulated / "events.csv"), "--horizon", "120",
        "--criterion", "mdl", "--out", str(tmp_path / "x"),
    )
    assert code == 1
    assert "Unknown criterion 'mdl'" in capsys.readouterr().err


def test_max_parents_above_p_is_usage_error(tmp_path, simulated, run_cli):
    code = run_cli(
        "infer", "--events", str(simulated / "events.csv"), "--horizon", "120",
        "--max-parents", "4", "--out", str(tmp_path / "x"),
    )
    assert code == 1


def test_missing_flag_is_usage_error(run_cli):
    assert run_cli("infer", "--horizon", "10") == 1
    assert run_cli() == 1


def test_bad_events_is_data_error(tmp_path, run_cli):
    path = tmp_path / "events.csv"
    path.write_text("node_id,time\n1,2.0\n1,1.0\n")
    code = run_cli("infer", "--events", str(path), "--horizon", "5", "--out", str(tmp_path / "x"))
    assert code == 2


def test_missing_file_is_data_error(tmp_path, run_cli):
    code = run_cli(
        "infer", "--events", str(tmp_path / "nope.csv"), "--horizon", "5",
        "--out", str(tmp_path / "x"),
    )
    assert code == 2


def test_explosive_simulation_is_numerical_failure(tmp_path, run_cli):
    write_model(HawkesModel(mu=[1.0], alpha=[[3.0]], beta=[[1.0]]), tmp_path / "m.json")
    code = run_cli(
        "simulate", "--model", str(tmp_path / "m.json"), "--horizon", "100",
        "--max-events", "200", "--out", str(tmp_path / "x"),
    )
    assert code == 3


def test_unknown_experiment_is_usage_error(tmp_path, run_cli):
    code = run_cli("bench", "--experiment", "table9", "--out", str(tmp_path / "x"))
    assert code == 1


# =============================================================================
# Other commands
# =============================================================================


def test_criteria_lists_every_selector(run_cli, capsys):
    assert run_cli("criteria") == 0
    names = [line.split("\t")[0] for line in capsys.readouterr().out.splitlines()]
    assert sorted(names) == sorted(CRITERIA)


def test_kappa_to_stdout(run_cli, capsys):
    assert run_cli("kappa", "--k-max", "3") == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert lines[0] == "k,lower,upper,limit,known,digamma"
    assert len(lines) == 4


def test_bench_writes_tables(tmp_path, run_cli):
    out = tmp_path / "bench"
    code = run_cli(
        "bench", "--experiment", "table1-desk", "--trials", "1",
        "--methods", "bic", "rand", "--workers", "1", "--no-progress", "--out", str(out),
    )
    assert code == 0
    summary = pd.read_csv(out / "summary.csv")
    assert list(summary["method"]) == ["bic", "rand"]
    trials = pd.read_csv(out / "trials.csv")
    assert len(trials) == 2
    assert RunManifest.read(out).config["trials"] == 1


def test_ingest(tmp_path, run_cli, capsys):
    rng = np.random.default_rng(0)
    frame = pd.DataFrame(
        rng.normal(size=(60, 2)), columns=["AAA", "BBB"],
        index=pd.date_range("2020-01-01", periods=60).strftime("%Y-%m-%d"),
    )
    frame.index.name = "date"
    frame.to_csv(tmp_path / "series.csv")

    out = tmp_path / "events"
    code = run_cli(
        "ingest", "--input", str(tmp_path / "series.csv"), "--window", "20",
        "--quantile", "0.2", "--horizon", "50", "--out", str(out),
    )
    assert code == 0
    data = read_events(out / "events.csv", horizon=50.0, dims=2)
    assert data.dims == 2
    assert capsys.readouterr().out.splitlines()[0].startswith("AAA\t")


def test_ingest_window_too_long(tmp_path, run_cli):
    (tmp_path / "series.csv").write_text("AAA\n1\n2\n3\n")
    code = run_cli(
        "ingest", "--input", str(tmp_path / "series.csv"), "--window", "10",
        "--out", str(tmp_path / "x"),
    )
    assert code == 2


def test_replay_reproduces_outputs(tmp_path, simulated, run_cli):
    code = main(["replay", str(simulated), "--out", str(tmp_path / "again")])
    assert code == 0
    original = (simulated / "events.csv").read_text()
    assert (tmp_path / "again" / "events.csv").read_text() == original


def test_bad_log_level_is_usage_error(config_dir):
    assert main(["--config-dir", str(config_dir), "--log-level", "LOUD", "criteria"]) == 1


def test_infer_keeps_nodes_without_events(tmp_path, run_cli, capsys):
    model = HawkesModel(mu=[1.0, 1.0, 1e-6], alpha=np.zeros((3, 3)), beta=np.ones((3, 3)))
    write_model(model, tmp_path / "truth.json")
    sim = tmp_path / "sim"
    assert run_cli(
        "simulate", "--model", str(tmp_path / "truth.json"),
        "--horizon", "20", "--seed", "3", "--out", str(sim),
    ) == 0
    assert capsys.readouterr().out.splitlines()[2] == "3\t0"
    assert RunManifest.read(sim).outputs["events_meta"].endswith("events.meta.json")

    out = tmp_path / "inferred"
    assert run_cli(
        "infer", "--events", str(sim / "events.csv"), "--horizon", "20",
        "--criterion", "bic", "--workers", "1", "--out", str(out),
    ) == 0
    assert read_graph(out / "graph.json").dims == 3
    assert run_cli(
        "score", "--predicted", str(out / "graph.json"),
        "--truth-model", str(sim / "model.json"),
    ) == 0


def test_infer_dims_must_match_model(tmp_path, simulated, run_cli):
    code = run_cli(
        "infer", "--events", str(simulated / "events.csv"), "--horizon", "120",
        "--dims", "2", "--model", str(simulated / "model.json"), "--out", str(tmp_path / "x"),
    )
    assert code == 1


def test_prior_of_other_kind_is_usage_error(tmp_path, simulated, run_cli, capsys):
    code = run_cli(
        "infer", "--events", str(simulated / "events.csv"), "--horizon", "120",
        "--criterion", "mml-u", "--prior", "exponential", "--prior-value", "0.3",
        "--out", str(tmp_path / "x"),
    )
    assert code == 1
    assert "mml-u takes a uniform prior" in capsys.readouterr().err
    assert not (tmp_path / "x" / "graph.json").exists()


def test_prior_value_is_recorded_in_manifest(tmp_path, simulated, run_cli):
    out = tmp_path / "x"
    code = run_cli(
        "infer", "--events", str(simulated / "events.csv"), "--horizon", "120",
        "--criterion", "mml-e", "--prior-value", "0.3", "--max-parents", "1",
        "--workers", "1", "--out", str(out),
    )
    assert code == 0
    assert RunManifest.read(out).config["prior"] == {"kind": "exponential", "value": 0.3}

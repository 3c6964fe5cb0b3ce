"""Tests for the synthetic benchmark harness."""

import math

import numpy as np
import pandas as pd
import pytest

from hawkes_mml.core.bench import (
    STREAM_METHODS,
    STREAM_SIMULATION,
    ExperimentSpec,
    SweepSpec,
    make_truth,
    prior_sweep,
    run_experiment,
    summarize,
    trial_seed,
)
from hawkes_mml.core.priors import PriorSpec
from hawkes_mml.utils.errors import ValidationError


def _spec(**overrides):
    data = {
        "setting": "cascade",
        "p": 3,
        "horizon": 60.0,
        "trials": 2,
        "methods": ["bic", "rand"],
        "seed": 11,
    }
    data.update(overrides)
    return ExperimentSpec.from_dict(data, name="unit")


# =============================================================================
# Spec
# =============================================================================


def test_spec_fills_setting_defaults():
    spec = _spec(setting="bernoulli")
    assert spec.prior_preset == "mid-dense"
    assert spec.alpha == [0.1, 0.2]
    assert spec.mu == [0.5, 1.0]
    assert spec.edge_probability == 0.3


def test_spec_validation():
    with pytest.raises(ValidationError, match="setting"):
        _spec(setting="ring")
    with pytest.raises(ValidationError, match="method"):
        _spec(methods=["mdl"])
    with pytest.raises(ValidationError, match="missing 'p'"):
        ExperimentSpec.from_dict({"setting": "cascade", "horizon": 10.0})
    with pytest.raises(ValidationError):
        _spec(alpha=[0.3, 0.1])


def test_spec_priors_override_preset():
    spec = _spec(priors={"uniform": 4.0})
    assert spec.prior_for("uniform") == PriorSpec.uniform(4.0)
    assert spec.prior_for("exponential") == PriorSpec.exponential(1e-5)
    assert spec.search_config("mml-u", 3).prior == PriorSpec.uniform(4.0)
    assert spec.search_config("bic", 3).prior is None


def test_sweep_grid_is_log_spaced():
    grid = SweepSpec(kind="uniform", low=1.0, high=1e4, points=5).grid()
    np.testing.assert_allclose(grid, [1.0, 10.0, 100.0, 1e3, 1e4])
    with pytest.raises(ValidationError):
        SweepSpec(low=10.0, high=1.0)


# =============================================================================
# Ground truth
# =============================================================================


def test_cascade_truth():
    model, truth = make_truth(_spec(p=5), 0)
    assert truth.edges() == [(0, 0), (1, 0), (2, 1), (3, 2), (4, 3)]
    np.testing.assert_allclose(model.alpha[truth.adjacency == 1], 0.55)
    np.testing.assert_allclose(model.mu, 0.5)


def test_single_input_truth_has_one_parent_per_node():
    _, truth = make_truth(_spec(setting="single-input", p=6), 4)
    np.testing.assert_array_equal(truth.adjacency.sum(axis=1), np.ones(6))


def test_bernoulli_truth_draws_ranges():
    model, truth = make_truth(_spec(setting="bernoulli", p=6), 1)
    assert np.all(np.diag(truth.adjacency) == 1)
    weights = model.alpha[truth.adjacency == 1]
    assert np.all((weights >= 0.1) & (weights <= 0.2))
    assert np.all((model.mu >= 0.5) & (model.mu <= 1.0))
    np.testing.assert_array_equal(model.alpha[truth.adjacency == 0], 0.0)


def test_truth_depends_only_on_seed_and_trial():
    a, _ = make_truth(_spec(setting="bernoulli"), 3)
    b, _ = make_truth(_spec(setting="bernoulli", methods=["aic"]), 3)
    c, _ = make_truth(_spec(setting="bernoulli"), 4)
    assert a == b
    assert a != c


def test_trial_seeds_use_separate_streams():
    assert trial_seed(1, 0, STREAM_SIMULATION) == trial_seed(1, 0, STREAM_SIMULATION)
    assert trial_seed(1, 0, STREAM_SIMULATION) != trial_seed(1, 0, STREAM_METHODS)
    assert trial_seed(1, 0, STREAM_SIMULATION) != trial_seed(1, 1, STREAM_SIMULATION)


def test_bernoulli_truth_mean_edge_count():
    spec = _spec(setting="bernoulli", p=7)
    edges = [make_truth(spec, trial)[1].edge_count for trial in range(300)]
    # p + 0.3 p (p - 1)
    assert np.mean(edges) == pytest.approx(19.6, abs=0.7)


# =============================================================================
# Running experiments
# =============================================================================


def test_run_experiment_tables():
    result = run_experiment(_spec())
    assert len(result.trials) == 4
    assert list(result.summary["method"]) == ["bic", "rand"]
    assert set(result.summary.columns) == {
        "method", "mean_f1", "std_f1", "mean_tp_rate", "mean_runtime",
        "trials_ok", "trials_failed", "workers",
    }
    ok = result.trials[result.trials["status"] == "ok"]
    assert ok["f1"].between(0.0, 1.0).all()


def test_run_experiment_is_independent_of_workers():
    serial = run_experiment(_spec(), workers=1)
    parallel = run_experiment(_spec(), workers=2)
    columns = ["trial", "method", "status", "f1", "graph", "events"]
    pd.testing.assert_frame_equal(serial.trials[columns], parallel.trials[columns])


def test_summarize_counts_failures():
    trials = pd.DataFrame(
        [
            {"trial": 0, "method": "bic", "status": "ok", "precision": 1.0, "recall": 0.5,
             "f1": 2 / 3, "tp": 1, "predicted": 1, "truth": 2, "runtime": 0.1},
            {"trial": 1, "method": "bic", "status": "failed", "precision": math.nan,
             "recall": math.nan, "f1": math.nan, "tp": math.nan, "predicted": math.nan,
             "truth": math.nan, "runtime": math.nan},
        ]
    )
    summary = summarize(trials, ["bic", "aic"])
    bic = summary.iloc[0]
    assert bic["trials_ok"] == 1
    assert bic["trials_failed"] == 1
    assert bic["mean_f1"] == pytest.approx(2 / 3)
    assert bic["std_f1"] == 0.0
    assert math.isnan(summary.iloc[1]["mean_f1"])


def test_prior_sweep_rows():
    spec = _spec(methods=["mml-u"], trials=1, max_parents=1)
    frame = prior_sweep(spec, SweepSpec(kind="uniform", low=1.0, high=100.0, points=3))
    assert list(frame.columns) == ["hyperparameter", "mean_f1", "std_f1", "mean_tp_rate", "trials_ok"]
    np.testing.assert_allclose(frame["hyperparameter"], [1.0, 10.0, 100.0])
    assert (frame["trials_ok"] <= 1).all()

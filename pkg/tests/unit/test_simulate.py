"""Tests for the thinning simulator."""

import numpy as np
import pytest

from hawkes_mml.core.events import HawkesModel
from hawkes_mml.core.likelihood import time_rescaling_ks
from hawkes_mml.core.simulate import SimConfig, simulate
from hawkes_mml.utils.errors import SimulationError, ValidationError


def test_simulation_is_deterministic(cascade_model):
    first = simulate(SimConfig(model=cascade_model, horizon=50.0, seed=123))
    second = simulate(SimConfig(model=cascade_model, horizon=50.0, seed=123))
    other = simulate(SimConfig(model=cascade_model, horizon=50.0, seed=124))
    assert first == second
    assert first != other


def test_simulation_respects_horizon(cascade_model):
    data = simulate(SimConfig(model=cascade_model, horizon=30.0, seed=1))
    assert data.horizon == 30.0
    for times in data.times:
        assert np.all(times > 0.0)
        assert np.all(times <= 30.0)
        assert np.all(np.diff(times) > 0.0)


def test_poisson_counts_match_rate():
    model = HawkesModel(mu=[5.0, 2.0], alpha=np.zeros((2, 2)), beta=np.ones((2, 2)))
    data = simulate(SimConfig(model=model, horizon=100.0, seed=7))
    # mean 500 and 200, five standard deviations of slack
    assert abs(data.counts[0] - 500) < 5 * np.sqrt(500)
    assert abs(data.counts[1] - 200) < 5 * np.sqrt(200)


def test_stationary_rate_matches_long_run_count(cascade_model):
    data = simulate(SimConfig(model=cascade_model, horizon=2000.0, seed=99))
    rates = np.asarray(data.counts) / data.horizon
    np.testing.assert_allclose(rates, cascade_model.stationary_rates(), rtol=0.15)


def test_rescaled_times_pass_ks(cascade_model):
    data = simulate(SimConfig(model=cascade_model, horizon=500.0, seed=2024))
    for result in time_rescaling_ks(cascade_model, data):
        assert result.pvalue > 1e-3


def test_explosive_model_hits_event_cap():
    model = HawkesModel(mu=[1.0], alpha=[[3.0]], beta=[[1.0]])
    with pytest.raises(SimulationError) as excinfo:
        simulate(SimConfig(model=model, horizon=100.0, seed=0, max_events=500))
    assert excinfo.value.events > 500


@pytest.mark.parametrize("seed", [-1, 2**64, 1.5])
def test_seed_must_be_unsigned_64_bit(cascade_model, seed):
    with pytest.raises(ValidationError):
        SimConfig(model=cascade_model, horizon=10.0, seed=seed)


def test_config_dict_names_generator(cascade_model):
    payload = SimConfig(model=cascade_model, horizon=10.0, seed=3).to_dict()
    assert payload["rng"] == "PCG64"
    assert payload["seed"] == 3

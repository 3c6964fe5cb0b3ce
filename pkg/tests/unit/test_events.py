"""Tests for event data, model parameters, structures and graphs."""

import math

import numpy as np
import pytest

from hawkes_mml.core.events import (
    Graph,
    HawkesModel,
    NodeParams,
    Structure,
    intensity,
    validate_events,
)
from hawkes_mml.utils.errors import NumericalError, ValidationError


# =============================================================================
# validate_events
# =============================================================================


def test_validate_events_builds_read_only_arrays():
    data = validate_events([[0.5, 1.5], [], [2.0]], horizon=2.0)

    assert data.dims == 3
    assert data.counts == (2, 0, 1)
    assert data.total_events == 3
    assert data.t_max == 2.0
    with pytest.raises(ValueError):
        data.times[0][0] = 9.0


def test_validate_events_accepts_event_at_horizon():
    data = validate_events([[1.0, 5.0]], horizon=5.0)
    assert data.t_max == 5.0


@pytest.mark.parametrize(
    "raw, match",
    [
        ([[0.0, 1.0]], "must lie in"),
        ([[1.0, 6.0]], "must lie in"),
        ([[1.0, 1.0]], "duplicate timestamp"),
        ([[2.0, 1.0]], "not increasing"),
        ([[1.0, float("nan")]], "finite"),
        ([], "at least one node"),
    ],
)
def test_validate_events_rejects_bad_input(raw, match):
    with pytest.raises(ValidationError, match=match):
        validate_events(raw, horizon=5.0)


def test_validate_events_rejects_bad_horizon():
    with pytest.raises(ValidationError):
        validate_events([[1.0]], horizon=0.0)


def test_t_max_undefined_without_events():
    data = validate_events([[], []], horizon=1.0)
    with pytest.raises(ValidationError):
        _ = data.t_max


def test_event_data_equality():
    a = validate_events([[1.0, 2.0]], horizon=3.0)
    b = validate_events([[1.0, 2.0]], horizon=3.0)
    c = validate_events([[1.0, 2.5]], horizon=3.0)
    assert a == b
    assert a != c


# =============================================================================
# HawkesModel
# =============================================================================


def test_model_rejects_bad_parameters():
    with pytest.raises(ValidationError, match="mu_i"):
        HawkesModel(mu=[0.0], alpha=[[0.1]], beta=[[1.0]])
    with pytest.raises(ValidationError, match="alpha_ij"):
        HawkesModel(mu=[1.0], alpha=[[-0.1]], beta=[[1.0]])
    with pytest.raises(ValidationError, match="beta_ij"):
        HawkesModel(mu=[1.0], alpha=[[0.1]], beta=[[0.0]])
    with pytest.raises(ValidationError, match="shapes"):
        HawkesModel(mu=[1.0, 1.0], alpha=[[0.1]], beta=[[1.0]])


def test_model_stability_and_stationary_rates(cascade_model):
    assert cascade_model.spectral_radius == pytest.approx(0.4)
    assert cascade_model.is_stable

    rates = cascade_model.stationary_rates()
    lam1 = 0.3 / 0.6
    lam2 = 0.3 + 0.5 * lam1
    lam3 = 0.3 + 0.5 * lam2
    np.testing.assert_allclose(rates, [lam1, lam2, lam3])


def test_stationary_rates_of_unstable_model_raise():
    model = HawkesModel(mu=[1.0], alpha=[[2.0]], beta=[[1.0]])
    assert not model.is_stable
    with pytest.raises(NumericalError):
        model.stationary_rates()


def test_model_graph_marks_nonzero_weights(cascade_model):
    graph = cascade_model.graph()
    assert graph.edges() == [(0, 0), (1, 0), (2, 1)]


# =============================================================================
# Structure, NodeParams, Graph
# =============================================================================


def test_structure_from_indices():
    gamma = Structure.from_indices(4, [3, 1])
    assert gamma.gamma == (0, 1, 0, 1)
    assert gamma.k == 2
    assert gamma.active == (1, 3)
    assert gamma.label() == "0101"
    assert gamma.sort_key == (2, (1, 3))


def test_structure_rejects_non_binary_entries():
    with pytest.raises(ValidationError):
        Structure((0, 2))


def test_node_params_check_dimension():
    gamma = Structure((1, 0, 1))
    theta = NodeParams(mu=0.5, alpha=(0.1, 0.2))
    theta.check(gamma)
    np.testing.assert_array_equal(theta.full_alpha(gamma), [0.1, 0.0, 0.2])
    assert theta.size == 3

    with pytest.raises(ValidationError, match="needs 3"):
        NodeParams(mu=0.5, alpha=(0.1,)).check(gamma)


def test_graph_from_structures_and_rows():
    rows = [Structure((1, 0)), Structure((1, 1))]
    graph = Graph.from_structures(rows)
    assert graph.dims == 2
    assert graph.edge_count == 3
    assert graph.row(1) == rows[1]
    assert graph == Graph(np.array([[1, 0], [1, 1]]))
    assert hash(graph) == hash(Graph(np.array([[1, 0], [1, 1]])))


def test_graph_rejects_bad_adjacency():
    with pytest.raises(ValidationError):
        Graph(np.array([[0, 1, 0], [1, 0, 0]]))
    with pytest.raises(ValidationError):
        Graph(np.array([[0, 2], [1, 0]]))


# =============================================================================
# intensity
# =============================================================================


def test_intensity_uses_strict_past():
    model = HawkesModel(mu=[1.0], alpha=[[0.5]], beta=[[1.0]])
    data = validate_events([[1.0, 2.0]], horizon=3.0)

    assert intensity(model, data, 0, 1.0) == pytest.approx(1.0)
    assert intensity(model, data, 0, 2.0) == pytest.approx(1.0 + 0.5 * math.exp(-1.0))
    assert intensity(model, data, 0, 3.0) == pytest.approx(
        1.0 + 0.5 * (math.exp(-2.0) + math.exp(-1.0))
    )


def test_intensity_rejects_time_outside_horizon():
    model = HawkesModel(mu=[1.0], alpha=[[0.5]], beta=[[1.0]])
    data = validate_events([[1.0]], horizon=3.0)
    with pytest.raises(ValidationError):
        intensity(model, data, 0, 4.0)

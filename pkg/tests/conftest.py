"""Pytest configuration and fixtures for hawkes-mml tests."""

import os
from pathlib import Path

import numpy as np
import pytest

from hawkes_mml.core.events import HawkesModel, validate_events
from hawkes_mml.core.likelihood import build_cache


@pytest.fixture(autouse=True)
def clean_env():
    """Keep HAWKES_MML_* variables of the calling shell out of the tests."""
    old_env = os.environ.copy()
    for key in list(os.environ):
        if key.startswith("HAWKES_MML_"):
            del os.environ[key]
    yield
    os.environ.clear()
    os.environ.update(old_env)


@pytest.fixture
def config_dir():
    """Return the path to the shipped config directory."""
    return Path(__file__).parent.parent / "config"


@pytest.fixture
def toy_data():
    """Single node with events at t = 1 and t = 2."""
    return validate_events([[1.0, 2.0]], horizon=3.0)


@pytest.fixture
def two_node_data():
    """Small hand-written two-node event set."""
    return validate_events(
        [[0.5, 1.2, 2.9, 4.1, 6.0, 6.3], [1.0, 1.4, 3.0, 4.4, 4.5, 5.2, 7.7]],
        horizon=8.0,
    )


@pytest.fixture
def cascade_model():
    """Three-node cascade 1 -> 2 -> 3 with self-excitation on node 1."""
    alpha = np.array([[0.4, 0.0, 0.0], [0.5, 0.0, 0.0], [0.0, 0.5, 0.0]])
    return HawkesModel(mu=np.full(3, 0.3), alpha=alpha, beta=np.ones((3, 3)))


@pytest.fixture
def two_node_cache(two_node_data):
    """History cache of node 0 of two_node_data with beta = 1."""
    return build_cache(two_node_data, 0, [1.0, 1.0])

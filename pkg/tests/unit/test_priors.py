"""Tests for PriorSpec and negative log-priors."""

import math

import numpy as np
import pytest

from hawkes_mml.core.events import NodeParams
from hawkes_mml.core.priors import (
    PriorSpec,
    joint_neg_log_prior,
    neg_log_prior,
    neg_log_prior_grad,
    neg_log_prior_vector,
)
from hawkes_mml.utils.errors import ValidationError


def test_uniform_prior_is_flat_on_its_support():
    spec = PriorSpec.uniform(4.0)
    assert neg_log_prior(spec, NodeParams(1.0, (0.5, 3.9))) == pytest.approx(3 * math.log(4.0))
    assert neg_log_prior(spec, NodeParams(1.0, (4.5,))) == math.inf


def test_exponential_prior_example():
    spec = PriorSpec.exponential(1e-5)
    theta = NodeParams(1.0, (0.05,))
    assert neg_log_prior(spec, theta) == pytest.approx(1e-5 * 1.05 + 2 * 5 * math.log(10.0))


def test_exponential_prior_rejects_negative_components():
    spec = PriorSpec.exponential(0.3)
    assert neg_log_prior_vector(spec, np.array([1.0, -0.1])) == math.inf


def test_prior_gradient():
    np.testing.assert_array_equal(
        neg_log_prior_grad(PriorSpec.exponential(0.3), np.ones(3)), [0.3, 0.3, 0.3]
    )
    np.testing.assert_array_equal(neg_log_prior_grad(PriorSpec.uniform(4.0), np.ones(2)), 0.0)


def test_presets():
    assert PriorSpec.from_preset("uniform", "sparse") == PriorSpec.uniform(1e5)
    assert PriorSpec.from_preset("exponential", "mid-dense") == PriorSpec.exponential(0.3)
    with pytest.raises(ValidationError, match="preset"):
        PriorSpec.from_preset("uniform", "dense")


def test_spec_validation():
    with pytest.raises(ValidationError, match="kind"):
        PriorSpec("gamma", 1.0)
    with pytest.raises(ValidationError):
        PriorSpec.uniform(0.0)


def test_spec_dict_and_label():
    spec = PriorSpec.from_dict({"kind": "exponential", "value": 0.3})
    assert spec.to_dict() == {"kind": "exponential", "value": 0.3}
    assert spec.label() == "exponential(c=0.3)"
    assert PriorSpec.uniform(4.0).label() == "uniform(b=4)"


@pytest.mark.parametrize("spec", [PriorSpec.exponential(0.3), PriorSpec.uniform(10.0)])
def test_prior_midpoint_equality(spec):
    rng = np.random.default_rng(4)
    for _ in range(50):
        a = rng.uniform(0.0, 5.0, size=4)
        b = rng.uniform(0.0, 5.0, size=4)
        mid = neg_log_prior_vector(spec, 0.5 * (a + b))
        ends = 0.5 * (neg_log_prior_vector(spec, a) + neg_log_prior_vector(spec, b))
        assert mid == pytest.approx(ends, rel=1e-12, abs=1e-12)


@pytest.mark.parametrize("spec", [PriorSpec.exponential(1e-5), PriorSpec.uniform(1e5)])
def test_joint_prior_is_sum_over_nodes(spec):
    thetas = [NodeParams(0.5, (0.55,)), NodeParams(0.2), NodeParams(1.0, (0.1, 0.3, 0.2))]
    expected = sum(neg_log_prior(spec, theta) for theta in thetas)
    assert joint_neg_log_prior(spec, thetas) == pytest.approx(expected, rel=1e-12)
    assert joint_neg_log_prior(spec, []) == 0.0

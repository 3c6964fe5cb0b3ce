"""Negative log-priors for node parameter vectors."""

import math
from dataclasses import dataclass
from typing import Any, Dict, Sequence

import numpy as np

from hawkes_mml.config.constants import PRIOR_PRESETS
from hawkes_mml.core.events import NodeParams
from hawkes_mml.utils.errors import ValidationError
from hawkes_mml.utils.validation import validate_positive

PRIOR_KINDS = ("uniform", "exponential")


@dataclass(frozen=True)
class PriorSpec:
    """
    Prior over theta_i = (mu_i, alpha_i).

    uniform(b): flat on [0, b]^(k+1).
    exponential(c): independent Exp(c) on each component.
    """

    kind: str
    value: float

    def __post_init__(self) -> None:
        if self.kind not in PRIOR_KINDS:
            raise ValidationError(
                f"Unknown prior kind '{self.kind}', expected one of {', '.join(PRIOR_KINDS)}"
            )
        object.__setattr__(
            self, "value", validate_positive(f"{self.kind} prior hyperparameter", self.value)
        )

    @classmethod
    def uniform(cls, b: float) -> "PriorSpec":
        return cls("uniform", b)

    @classmethod
    def exponential(cls, c: float) -> "PriorSpec":
        return cls("exponential", c)

    @classmethod
    def from_preset(cls, kind: str, preset: str) -> "PriorSpec":
        """Look up a named preset ("sparse" or "mid-dense") for a prior kind."""
        if preset not in PRIOR_PRESETS:
            raise ValidationError(
                f"Unknown prior preset '{preset}', expected one of {', '.join(PRIOR_PRESETS)}"
            )
        return cls(kind, PRIOR_PRESETS[preset][kind])

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "PriorSpec":
        return cls(kind=data["kind"], value=data["value"])

    def to_dict(self) -> Dict[str, Any]:
        return {"kind": self.kind, "value": self.value}

    def label(self) -> str:
        symbol = "b" if self.kind == "uniform" else "c"
        return f"{self.kind}({symbol}={self.value:g})"


def neg_log_prior_vector(spec: PriorSpec, vector: np.ndarray) -> float:
    """-log pi(theta) for a raw vector of k+1 non-negative parameters."""
    vector = np.asarray(vector, dtype=float)
    size = vector.shape[0]
    if spec.kind == "uniform":
        if np.any(vector < 0) or np.any(vector > spec.value):
            return math.inf
        return size * math.log(spec.value)
    if np.any(vector < 0):
        return math.inf
    return spec.value * float(np.sum(vector)) - size * math.log(spec.value)


def neg_log_prior_grad(spec: PriorSpec, vector: np.ndarray) -> np.ndarray:
    """Gradient of neg_log_prior_vector inside its support."""
    vector = np.asarray(vector, dtype=float)
    if spec.kind == "uniform":
        return np.zeros_like(vector)
    return np.full_like(vector, spec.value)


def neg_log_prior(spec: PriorSpec, theta: NodeParams) -> float:
    """
    Negative log-prior of one node's parameters.

    Under a structure with k active parents the vector has k + 1 entries:
        uniform(b):      (k + 1) log b, or +inf when a component exceeds b
        exponential(c):  c (mu + sum alpha) - (k + 1) log c
    """
    return neg_log_prior_vector(spec, theta.as_vector())


def joint_neg_log_prior(spec: PriorSpec, thetas: Sequence[NodeParams]) -> float:
    """-log pi(theta) over all nodes; node priors are independent."""
    if not thetas:
        return 0.0
    return neg_log_prior_vector(spec, np.concatenate([t.as_vector() for t in thetas]))

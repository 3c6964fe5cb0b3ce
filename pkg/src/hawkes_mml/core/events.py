"""Core data types: event sequences, model parameters, structures and graphs.

All types are immutable after construction (frozen dataclasses holding
read-only numpy arrays) and can be shared freely between workers.
"""

import math
from dataclasses import dataclass
from typing import Iterable, List, Sequence, Tuple

import numpy as np

from hawkes_mml.utils.errors import NumericalError, ValidationError
from hawkes_mml.utils.logging import get_logger
from hawkes_mml.utils.validation import validate_dimension, validate_horizon

logger = get_logger("events")


def _frozen(array: np.ndarray) -> np.ndarray:
    array = np.array(array, dtype=float)
    array.setflags(write=False)
    return array


@dataclass(frozen=True)
class EventData:
    """Per-node sorted event times observed on the horizon (0, T]."""

    times: Tuple[np.ndarray, ...]
    horizon: float

    @property
    def dims(self) -> int:
        return len(self.times)

    @property
    def counts(self) -> Tuple[int, ...]:
        return tuple(len(x) for x in self.times)

    @property
    def total_events(self) -> int:
        return sum(self.counts)

    @property
    def t_max(self) -> float:
        """Largest event time over all nodes; the likelihood integrates up to it."""
        last = [x[-1] for x in self.times if len(x)]
        if not last:
            raise ValidationError("t_max is undefined for an event set without events")
        return float(max(last))

    def node_times(self, node: int) -> np.ndarray:
        return self.times[node]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, EventData):
            return NotImplemented
        return self.horizon == other.horizon and self.dims == other.dims and all(
            np.array_equal(a, b) for a, b in zip(self.times, other.times)
        )

    __hash__ = None  # type: ignore[assignment]


@dataclass(frozen=True)
class HawkesModel:
    """
    Exponential-kernel multivariate Hawkes process.

    Intensity of node i:
        lambda_i(t) = mu_i + sum_j alpha_ij sum_{t^j_k < t} exp(-beta_ij (t - t^j_k))
    """

    mu: np.ndarray
    alpha: np.ndarray
    beta: np.ndarray

    def __post_init__(self) -> None:
        mu = np.atleast_1d(np.asarray(self.mu, dtype=float))
        alpha = np.atleast_2d(np.asarray(self.alpha, dtype=float))
        beta = np.atleast_2d(np.asarray(self.beta, dtype=float))
        p = mu.shape[0]
        if mu.ndim != 1 or alpha.shape != (p, p) or beta.shape != (p, p):
            raise ValidationError(
                f"Model shapes disagree: mu {mu.shape}, alpha {alpha.shape}, beta {beta.shape}"
            )
        if not (np.all(np.isfinite(mu)) and np.all(np.isfinite(alpha))
                and np.all(np.isfinite(beta))):
            raise ValidationError("Model parameters must be finite")
        if np.any(mu <= 0):
            raise ValidationError("Background intensities mu_i must be > 0")
        if np.any(alpha < 0):
            raise ValidationError("Influence weights alpha_ij must be >= 0")
        if np.any(beta <= 0):
            raise ValidationError("Decay constants beta_ij must be > 0")
        object.__setattr__(self, "mu", _frozen(mu))
        object.__setattr__(self, "alpha", _frozen(alpha))
        object.__setattr__(self, "beta", _frozen(beta))
        if not self.is_stable:
            logger.warning(
                f"Model is not stable: spectral radius of alpha/beta is "
                f"{self.spectral_radius:.4f} >= 1"
            )

    @property
    def dims(self) -> int:
        return int(self.mu.shape[0])

    @property
    def branching_matrix(self) -> np.ndarray:
        return self.alpha / self.beta

    @property
    def spectral_radius(self) -> float:
        return float(np.max(np.abs(np.linalg.eigvals(self.branching_matrix))))

    @property
    def is_stable(self) -> bool:
        return self.spectral_radius < 1.0

    def stationary_rates(self) -> np.ndarray:
        """
        Stationary event rates, solving Lambda = mu + (alpha/beta) Lambda.

        Raises:
            NumericalError: If the model is not stable
        """
        if not self.is_stable:
            raise NumericalError("Stationary rates do not exist for an unstable model")
        return np.linalg.solve(np.eye(self.dims) - self.branching_matrix, self.mu)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, HawkesModel):
            return NotImplemented
        return (
            np.array_equal(self.mu, other.mu)
            and np.array_equal(self.alpha, other.alpha)
            and np.array_equal(self.beta, other.beta)
        )

    __hash__ = None  # type: ignore[assignment]

    def graph(self) -> "Graph":
        """Connectivity graph implied by the non-zero influence weights."""
        return Graph((self.alpha > 0).astype(np.int8))


@dataclass(frozen=True, order=True)
class Structure:
    """Binary parent-inclusion vector gamma_i over the p candidate parents."""

    gamma: Tuple[int, ...]

    def __post_init__(self) -> None:
        gamma = tuple(int(g) for g in self.gamma)
        if any(g not in (0, 1) for g in gamma):
            raise ValidationError(f"Structure entries must be 0 or 1, got {self.gamma}")
        object.__setattr__(self, "gamma", gamma)

    @classmethod
    def from_indices(cls, dims: int, indices: Iterable[int]) -> "Structure":
        gamma = [0] * dims
        for j in indices:
            gamma[j] = 1
        return cls(tuple(gamma))

    @classmethod
    def empty(cls, dims: int) -> "Structure":
        return cls((0,) * dims)

    @property
    def dims(self) -> int:
        return len(self.gamma)

    @property
    def k(self) -> int:
        return sum(self.gamma)

    @property
    def active(self) -> Tuple[int, ...]:
        return tuple(j for j, g in enumerate(self.gamma) if g)

    @property
    def sort_key(self) -> Tuple[int, Tuple[int, ...]]:
        """Tie-break order: fewest parents first, then smallest parent indices."""
        return (self.k, self.active)

    def label(self) -> str:
        return "".join(str(g) for g in self.gamma)


@dataclass(frozen=True)
class NodeParams:
    """Parameter vector theta_i = (mu_i, alpha_i restricted to the active parents)."""

    mu: float
    alpha: Tuple[float, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "mu", float(self.mu))
        object.__setattr__(self, "alpha", tuple(float(a) for a in self.alpha))

    @classmethod
    def from_vector(cls, vector: Sequence[float]) -> "NodeParams":
        return cls(mu=vector[0], alpha=tuple(vector[1:]))

    @property
    def size(self) -> int:
        return 1 + len(self.alpha)

    def as_vector(self) -> np.ndarray:
        return np.array((self.mu,) + self.alpha, dtype=float)

    def check(self, gamma: Structure) -> None:
        """
        Check the dimension against a structure.

        Raises:
            ValidationError: If dim(theta) != k + 1
        """
        if len(self.alpha) != gamma.k:
            raise ValidationError(
                f"Parameter vector has {self.size} entries, structure "
                f"{gamma.label()} needs {gamma.k + 1}"
            )

    def full_alpha(self, gamma: Structure) -> np.ndarray:
        """Scatter the active influence weights back to a length-p row."""
        self.check(gamma)
        row = np.zeros(gamma.dims)
        row[list(gamma.active)] = self.alpha
        return row


@dataclass(frozen=True)
class Graph:
    """Binary adjacency; entry (i, j) = 1 means node j Granger-causes node i."""

    adjacency: np.ndarray

    def __post_init__(self) -> None:
        adjacency = np.atleast_2d(np.asarray(self.adjacency))
        if adjacency.ndim != 2 or adjacency.shape[0] != adjacency.shape[1]:
            raise ValidationError(f"Adjacency must be square, got shape {adjacency.shape}")
        if not np.all(np.isin(adjacency, (0, 1))):
            raise ValidationError("Adjacency entries must be 0 or 1")
        adjacency = adjacency.astype(np.int8)
        adjacency.setflags(write=False)
        object.__setattr__(self, "adjacency", adjacency)

    @classmethod
    def from_structures(cls, rows: Sequence[Structure]) -> "Graph":
        return cls(np.array([row.gamma for row in rows], dtype=np.int8))

    @classmethod
    def empty(cls, dims: int) -> "Graph":
        return cls(np.zeros((dims, dims), dtype=np.int8))

    @property
    def dims(self) -> int:
        return int(self.adjacency.shape[0])

    @property
    def edge_count(self) -> int:
        return int(self.adjacency.sum())

    def row(self, node: int) -> Structure:
        return Structure(tuple(self.adjacency[node]))

    def edges(self) -> List[Tuple[int, int]]:
        """(target, source) pairs, 0-based."""
        return [(int(i), int(j)) for i, j in zip(*np.nonzero(self.adjacency))]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return np.array_equal(self.adjacency, other.adjacency)

    def __hash__(self) -> int:
        return hash(self.adjacency.tobytes())


def validate_events(raw: Sequence[Sequence[float]], horizon: float) -> EventData:
    """
    Validate raw per-node event times and build EventData.

    Args:
        raw: One sequence of event times per node
        horizon: Observation horizon T

    Returns:
        Validated EventData

    Raises:
        ValidationError: On non-monotone times, duplicates within a node,
            or times outside (0, T]
    """
    horizon = validate_horizon(horizon)
    if len(raw) == 0:
        raise ValidationError("Event data needs at least one node")
    validate_dimension(len(raw))

    times = []
    for node, values in enumerate(raw):
        x = np.asarray(values, dtype=float).reshape(-1)
        if not np.all(np.isfinite(x)):
            raise ValidationError(f"Node {node + 1}: event times must be finite")
        if x.size and (x[0] <= 0.0 or x.max() > horizon or x.min() <= 0.0):
            raise ValidationError(
                f"Node {node + 1}: event times must lie in (0, T={horizon}], "
                f"got range [{x.min()}, {x.max()}]"
            )
        steps = np.diff(x)
        if np.any(steps == 0):
            at = int(np.argmax(steps == 0)) + 1
            raise ValidationError(
                f"Node {node + 1}: duplicate timestamp {x[at]} at position {at + 1}"
            )
        if np.any(steps < 0):
            at = int(np.argmax(steps < 0)) + 1
            raise ValidationError(
                f"Node {node + 1}: event times are not increasing at position {at + 1} "
                f"({x[at - 1]} then {x[at]})"
            )
        times.append(_frozen(x))
    return EventData(times=tuple(times), horizon=horizon)


def intensity(model: HawkesModel, data: EventData, node: int, t: float) -> float:
    """
    Conditional intensity lambda_i(t) of one node.

    Events at exactly t do not excite (strict inequality t^j_k < t).

    Raises:
        ValidationError: On dimension mismatch or t outside [0, T]
    """
    if model.dims != data.dims:
        raise ValidationError(
            f"Model has {model.dims} nodes but the data has {data.dims}"
        )
    if not 0 <= node < data.dims:
        raise ValidationError(f"Node index {node + 1} outside 1..{data.dims}")
    if not (math.isfinite(t) and 0.0 <= t <= data.horizon):
        raise ValidationError(f"t={t} outside [0, T={data.horizon}]")

    value = float(model.mu[node])
    for j, source in enumerate(data.times):
        if model.alpha[node, j] == 0.0:
            continue
        past = source[source < t]
        value += model.alpha[node, j] * float(np.exp(-model.beta[node, j] * (t - past)).sum())
    return value

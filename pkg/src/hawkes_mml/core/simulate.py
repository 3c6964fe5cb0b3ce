"""Exact simulation of exp-MHP sample paths by Ogata's thinning."""

import math
from dataclasses import dataclass
from typing import Any, Dict, List

import numpy as np

from hawkes_mml.config.constants import DEFAULT_MAX_EVENTS, RNG_ALGORITHM
from hawkes_mml.core.events import EventData, HawkesModel, validate_events
from hawkes_mml.core.io import model_to_dict
from hawkes_mml.utils.errors import SimulationError, ValidationError
from hawkes_mml.utils.logging import get_logger
from hawkes_mml.utils.validation import validate_horizon

logger = get_logger("simulate")


@dataclass(frozen=True)
class SimConfig:
    """Simulation request: model, horizon T, seed and event cap."""

    model: HawkesModel
    horizon: float
    seed: int
    max_events: int = DEFAULT_MAX_EVENTS

    def __post_init__(self) -> None:
        object.__setattr__(self, "horizon", validate_horizon(self.horizon))
        if int(self.seed) != self.seed or self.seed < 0 or self.seed >= 2**64:
            raise ValidationError(f"Seed must be a 64-bit unsigned integer, got {self.seed}")
        if self.max_events < 1:
            raise ValidationError(f"Event cap must be >= 1, got {self.max_events}")

    def to_dict(self) -> Dict[str, Any]:
        return {
            "model": model_to_dict(self.model),
            "horizon": self.horizon,
            "seed": int(self.seed),
            "max_events": int(self.max_events),
            "rng": RNG_ALGORITHM,
        }


def make_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


def simulate(config: SimConfig) -> EventData:
    """
    Draw one path on (0, T] starting from an empty history.

    The excitation state S[i, j] = sum over past events of j of
    exp(-beta_ij (t - t^j_k)) decays between points, so the total intensity
    right after the last point bounds the intensity until the next one.

    Raises:
        SimulationError: If the event cap is exceeded or the intensity
            becomes non-finite
    """
    model = config.model
    rng = make_rng(config.seed)
    p = model.dims
    mu, alpha, beta = model.mu, model.alpha, model.beta
    state = np.zeros((p, p))
    times: List[List[float]] = [[] for _ in range(p)]
    t = 0.0
    accepted = 0

    while True:
        rates = mu + np.sum(alpha * state, axis=1)
        bound = float(rates.sum())
        if not math.isfinite(bound):
            raise SimulationError(f"Intensity became non-finite at t={t:.6g}", events=accepted)
        candidate = t + rng.exponential(1.0 / bound)
        if candidate > config.horizon:
            break
        state *= np.exp(-beta * (candidate - t))
        t = candidate
        rates = mu + np.sum(alpha * state, axis=1)
        total = float(rates.sum())
        if rng.uniform() * bound > total:
            continue
        cumulative = np.cumsum(rates)
        node = int(np.searchsorted(cumulative, rng.uniform() * total, side="right"))
        node = min(node, p - 1)
        times[node].append(t)
        state[:, node] += 1.0
        accepted += 1
        if accepted > config.max_events:
            raise SimulationError(
                f"Simulation exceeded the cap of {config.max_events} events at "
                f"t={t:.6g}; the model is likely explosive",
                events=accepted,
            )

    logger.debug(f"Simulated {accepted} events for {p} nodes on (0, {config.horizon}]")
    return validate_events(times, config.horizon)

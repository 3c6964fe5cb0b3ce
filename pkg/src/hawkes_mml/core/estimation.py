"""MAP estimation of one node's parameters under a fixed structure."""

import math
from dataclasses import asdict, dataclass
from typing import Any, Callable, Dict, List, Optional, Tuple

import numpy as np
from scipy import optimize

from hawkes_mml.config.constants import (
    DEFAULT_FATOL,
    DEFAULT_MAX_ITER,
    DEFAULT_OPTIMIZER,
    DEFAULT_RESTARTS,
    DEFAULT_XATOL,
    OPTIMIZER_METHODS,
    PARAM_FLOOR,
)
from hawkes_mml.core.events import NodeParams, Structure
from hawkes_mml.core.likelihood import HistoryCache, grad_vector, nll_vector
from hawkes_mml.core.priors import PriorSpec, neg_log_prior_grad, neg_log_prior_vector
from hawkes_mml.utils.errors import OptimizationError, ValidationError
from hawkes_mml.utils.logging import get_logger

logger = get_logger("estimation")

INITIAL_ALPHA = 0.1
RESTART_SCALE = 0.5


@dataclass(frozen=True)
class OptimizerConfig:
    """Optimizer settings shared by every structure fit."""

    method: str = DEFAULT_OPTIMIZER
    xatol: float = DEFAULT_XATOL
    fatol: float = DEFAULT_FATOL
    max_iter: int = DEFAULT_MAX_ITER
    restarts: int = DEFAULT_RESTARTS

    def __post_init__(self) -> None:
        if self.method not in OPTIMIZER_METHODS:
            raise ValidationError(
                f"Unknown optimizer '{self.method}', expected one of "
                f"{', '.join(OPTIMIZER_METHODS)}"
            )
        if self.max_iter < 1 or self.restarts < 0:
            raise ValidationError("Optimizer needs max_iter >= 1 and restarts >= 0")

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "OptimizerConfig":
        return cls(
            method=data.get("method", DEFAULT_OPTIMIZER),
            xatol=float(data.get("xatol", DEFAULT_XATOL)),
            fatol=float(data.get("fatol", DEFAULT_FATOL)),
            max_iter=int(data.get("max_iter", DEFAULT_MAX_ITER)),
            restarts=int(data.get("restarts", DEFAULT_RESTARTS)),
        )

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


class NodeObjective:
    """
    NLL plus negative log-prior of one node as a function of the raw vector
    (mu, alpha over the active parents).
    """

    def __init__(self, cache: HistoryCache, gamma: Structure, prior: Optional[PriorSpec]):
        self.cache = cache
        self.gamma = gamma
        self.active = list(gamma.active)
        self.prior = prior

    def __call__(self, vector: np.ndarray) -> float:
        value = nll_vector(vector, self.active, self.cache)
        if self.prior is not None:
            value += neg_log_prior_vector(self.prior, vector)
        return value if math.isfinite(value) else math.inf

    def gradient(self, vector: np.ndarray) -> np.ndarray:
        grad = grad_vector(vector, self.active, self.cache)
        if self.prior is not None:
            grad = grad + neg_log_prior_grad(self.prior, vector)
        return grad

    def start(self) -> np.ndarray:
        """mu_0 = n_i / t_max, alpha_0 = 0.1 on every active parent."""
        mu0 = max(self.cache.n_events, 1) / self.cache.t_max
        start = np.concatenate(([mu0], np.full(len(self.active), INITIAL_ALPHA)))
        return np.minimum(start, 0.5 * self.upper_bound())

    def upper_bound(self) -> float:
        if self.prior is not None and self.prior.kind == "uniform":
            return self.prior.value
        return math.inf


def _to_params(eta: np.ndarray) -> np.ndarray:
    return np.maximum(np.exp(eta), PARAM_FLOOR)


def _nelder_mead(
    objective: NodeObjective, start: np.ndarray, config: OptimizerConfig
) -> optimize.OptimizeResult:
    result = optimize.minimize(
        lambda eta: objective(_to_params(eta)),
        np.log(start),
        method="Nelder-Mead",
        options={
            "xatol": config.xatol,
            "fatol": config.fatol,
            "maxiter": config.max_iter,
            "maxfev": config.max_iter * (start.size + 1),
            "adaptive": True,
        },
    )
    result.x = _to_params(result.x)
    return result


def _lbfgsb(
    objective: NodeObjective, start: np.ndarray, config: OptimizerConfig
) -> optimize.OptimizeResult:
    upper = objective.upper_bound()
    bounds = [(PARAM_FLOOR, None if math.isinf(upper) else upper)] * start.size
    return optimize.minimize(
        objective,
        np.clip(start, PARAM_FLOOR, upper),
        jac=objective.gradient,
        method="L-BFGS-B",
        bounds=bounds,
        options={"maxiter": config.max_iter, "ftol": config.fatol},
    )


_METHODS: Dict[str, Callable[..., optimize.OptimizeResult]] = {
    "nelder-mead": _nelder_mead,
    "l-bfgs-b": _lbfgsb,
}


def _starts(objective: NodeObjective, config: OptimizerConfig, rng: np.random.Generator) -> List[np.ndarray]:
    base = objective.start()
    starts = [base]
    for _ in range(config.restarts):
        starts.append(base * np.exp(rng.normal(0.0, RESTART_SCALE, size=base.size)))
    return starts


def restart_rng(seed: Optional[int], node: int, gamma: Structure) -> np.random.Generator:
    """Restart noise depends only on (seed, node, structure)."""
    bits = int(gamma.label(), 2) if gamma.dims else 0
    return np.random.default_rng([seed or 0, node, bits])


def fit_map(
    cache: HistoryCache,
    gamma: Structure,
    prior: Optional[PriorSpec],
    config: Optional[OptimizerConfig] = None,
    seed: Optional[int] = None,
) -> Tuple[NodeParams, float]:
    """
    Minimize NLL + negative log-prior over the non-negative orthant.

    Nelder-Mead runs on eta = log(theta) with theta floored at 1e-8; the
    optional L-BFGS-B mode uses the analytic gradient and box bounds. The
    first run starts at (n_i/t_max, 0.1, ..., 0.1), restarts perturb it.

    Args:
        cache: History cache of the node
        gamma: Structure to fit
        prior: Prior, or None for the plain MLE
        config: Optimizer settings
        seed: Master seed for restart perturbations

    Returns:
        (theta_hat, objective value at theta_hat)

    Raises:
        ValidationError: If the node has no events but gamma has parents
        OptimizationError: If no run converged to a finite value
    """
    config = config or OptimizerConfig()
    if cache.n_events == 0 and gamma.k > 0:
        raise ValidationError(
            f"Node {cache.node + 1} has no events; only the empty structure can be fitted"
        )

    objective = NodeObjective(cache, gamma, prior)
    minimize = _METHODS[config.method]
    best: Optional[optimize.OptimizeResult] = None
    messages = []
    for run, start in enumerate(_starts(objective, config, restart_rng(seed, cache.node, gamma))):
        result = minimize(objective, start, config)
        logger.debug(
            f"Node {cache.node + 1} structure {gamma.label()} run {run}: "
            f"f={result.fun:.10g} success={result.success} nit={result.nit}"
        )
        if not (result.success and math.isfinite(result.fun)):
            messages.append(str(result.message))
            continue
        if best is None or result.fun < best.fun:
            best = result

    if best is None:
        raise OptimizationError(cache.node, gamma.label(), "; ".join(sorted(set(messages))))
    return NodeParams.from_vector(best.x), float(best.fun)

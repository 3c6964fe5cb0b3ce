"""
Per-node negative log-likelihood, gradient and Hessian of an exp-MHP.

The log-likelihood separates over target nodes, so every quantity here is
computed for one node i at a time from a HistoryCache holding the weighted
history sums

    A_ij(t) = sum_{t^j_k < t} exp(-beta_ij (t - t^j_k))

evaluated at each event of node i. The compensator integrates up to t_max,
the largest event time over all nodes, not up to the horizon T.
"""

import math
import warnings
from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np
from scipy import linalg, stats

from hawkes_mml.config.constants import LOG_DETERMINANT_FLOOR
from hawkes_mml.core.events import EventData, HawkesModel, NodeParams, Structure
from hawkes_mml.utils.errors import NumericalError, SingularHessianError, ValidationError
from hawkes_mml.utils.logging import get_logger

logger = get_logger("likelihood")


@dataclass(frozen=True)
class HistoryCache:
    """
    Weighted event history of one target node, shared by every structure
    evaluated for that node.

    Attributes:
        node: Target node index (0-based)
        event_times: Events of the target node, shape (n_i,)
        A: A_ij(t^i_l), shape (n_i, p)
        counts_before: N_j(t^i_l -), number of source events strictly before
            each target event, shape (n_i, p)
        terminal: sum_k (1 - exp(-beta_ij (t_max - t^j_k))) / beta_ij, shape (p,)
        t_max: Integration endpoint of the compensator
        beta_row: Decay constants beta_i., shape (p,)
    """

    node: int
    event_times: np.ndarray
    A: np.ndarray
    counts_before: np.ndarray
    terminal: np.ndarray
    t_max: float
    beta_row: np.ndarray

    @property
    def dims(self) -> int:
        return int(self.beta_row.shape[0])

    @property
    def n_events(self) -> int:
        return int(self.event_times.shape[0])


def build_cache(data: EventData, node: int, beta_row: Sequence[float]) -> HistoryCache:
    """
    Build the history cache of one node.

    Each A_ij column is filled by a single merged sweep over the target and
    source event lists: the running sum decays between consecutive target
    events and picks up every source event falling in between.

    Args:
        data: Validated event data
        node: Target node index (0-based)
        beta_row: Decay constants beta_ij for j = 1..p

    Returns:
        HistoryCache for the node

    Raises:
        ValidationError: On a bad node index, beta row or empty data
    """
    if not 0 <= node < data.dims:
        raise ValidationError(f"Node index {node + 1} outside 1..{data.dims}")
    beta = np.asarray(beta_row, dtype=float).reshape(-1)
    if beta.shape != (data.dims,):
        raise ValidationError(f"Decay row has {beta.size} entries, expected {data.dims}")
    if not np.all(np.isfinite(beta)) or np.any(beta <= 0):
        raise ValidationError("Decay constants beta_ij must be finite and > 0")

    t_max = data.t_max
    target = data.node_times(node)
    n_i = target.shape[0]
    history = np.zeros((n_i, data.dims))
    counts = np.zeros((n_i, data.dims), dtype=np.int64)
    terminal = np.zeros(data.dims)

    for j, source in enumerate(data.times):
        b = float(beta[j])
        if source.size:
            terminal[j] = float(np.sum(-np.expm1(-b * (t_max - source)))) / b
        running = 0.0
        previous = 0.0
        ptr = 0
        for row in range(n_i):
            t = target[row]
            running *= math.exp(-b * (t - previous))
            while ptr < source.shape[0] and source[ptr] < t:
                running += math.exp(-b * (t - source[ptr]))
                ptr += 1
            history[row, j] = running
            counts[row, j] = ptr
            previous = t

    for array in (history, counts, terminal, beta):
        array.setflags(write=False)
    return HistoryCache(
        node=node,
        event_times=target,
        A=history,
        counts_before=counts,
        terminal=terminal,
        t_max=t_max,
        beta_row=beta,
    )


def _split(theta: NodeParams, gamma: Structure, cache: HistoryCache) -> Tuple[float, np.ndarray, List[int]]:
    if gamma.dims != cache.dims:
        raise ValidationError(
            f"Structure has {gamma.dims} entries but the data has {cache.dims} nodes"
        )
    theta.check(gamma)
    return theta.mu, np.asarray(theta.alpha, dtype=float), list(gamma.active)


def nll_vector(vector: np.ndarray, active: Sequence[int], cache: HistoryCache) -> float:
    """
    NLL at a raw parameter vector (mu, alpha over active parents).

    Returns +inf when some intensity is non-positive, so optimizers can treat
    it as outside the domain.
    """
    active = list(active)
    mu = float(vector[0])
    alpha = np.asarray(vector[1:], dtype=float)
    rates = mu + cache.A[:, active] @ alpha
    if np.any(rates <= 0) or mu <= 0:
        return math.inf
    compensator = mu * cache.t_max + float(cache.terminal[active] @ alpha)
    return float(compensator - np.sum(np.log(rates)))


def grad_vector(vector: np.ndarray, active: Sequence[int], cache: HistoryCache) -> np.ndarray:
    active = list(active)
    design = _design(active, cache)
    rates = design @ np.asarray(vector, dtype=float)
    grad = -design.T @ (1.0 / rates)
    grad[0] += cache.t_max
    grad[1:] += cache.terminal[active]
    return grad


def _design(active: Sequence[int], cache: HistoryCache) -> np.ndarray:
    """X = [1, A_active], one row per event of the target node."""
    return np.hstack((np.ones((cache.n_events, 1)), cache.A[:, list(active)]))


def nll_node(theta: NodeParams, gamma: Structure, cache: HistoryCache) -> float:
    """
    Negative log-likelihood l_i of node i under structure gamma_i.

        l_i = mu_i t_max + sum_{j in gamma} alpha_ij terminal_j
              - sum_l log(mu_i + sum_{j in gamma} alpha_ij A_ij(t^i_l))

    Raises:
        NumericalError: If the result is not finite (mu_i <= 0 or overflow)
    """
    mu, alpha, active = _split(theta, gamma, cache)
    value = nll_vector(np.concatenate(([mu], alpha)), active, cache)
    if not math.isfinite(value):
        raise NumericalError(
            f"Negative log-likelihood of node {cache.node + 1} is not finite "
            f"for structure {gamma.label()}"
        )
    return value


def grad_node(theta: NodeParams, gamma: Structure, cache: HistoryCache) -> np.ndarray:
    """
    Gradient (dl/dmu_i, dl/dalpha_ij for active j).

        dl/dmu_i      = t_max - sum_l 1/lambda_l
        dl/dalpha_ij  = terminal_j - sum_l A_ij(t^i_l)/lambda_l
    """
    mu, alpha, active = _split(theta, gamma, cache)
    grad = grad_vector(np.concatenate(([mu], alpha)), active, cache)
    if not np.all(np.isfinite(grad)):
        raise NumericalError(f"Gradient of node {cache.node + 1} is not finite")
    return grad


def hessian_node(theta: NodeParams, gamma: Structure, cache: HistoryCache) -> np.ndarray:
    """
    Hessian block H_i = X^T diag(1/lambda^2) X with X = [1, A_active].

    Positive semidefinite by construction and exactly symmetric.
    """
    mu, alpha, active = _split(theta, gamma, cache)
    design = _design(active, cache)
    rates = design @ np.concatenate(([mu], alpha))
    if cache.n_events and np.any(rates <= 0):
        raise NumericalError(f"Non-positive intensity for node {cache.node + 1}")
    weights = 1.0 / rates**2
    hessian = design.T @ (design * weights[:, None])
    hessian = 0.5 * (hessian + hessian.T)
    if not np.all(np.isfinite(hessian)):
        raise NumericalError(f"Hessian of node {cache.node + 1} is not finite")
    return hessian


def logdet_hessian(hessian: np.ndarray) -> float:
    """
    Log-determinant through a pivoted LU factorization.

    Raises:
        SingularHessianError: If the determinant is non-positive, at or below
            1e-300, or any intermediate is not finite
    """
    hessian = np.atleast_2d(np.asarray(hessian, dtype=float))
    if hessian.shape[0] != hessian.shape[1]:
        raise ValidationError(f"Hessian must be square, got shape {hessian.shape}")
    if not np.all(np.isfinite(hessian)):
        raise SingularHessianError("Hessian has non-finite entries")

    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        lu, piv = linalg.lu_factor(hessian, check_finite=False)
    diagonal = np.diag(lu)
    if np.any(diagonal == 0) or not np.all(np.isfinite(diagonal)):
        raise SingularHessianError("Hessian is singular", log_determinant=-math.inf)

    swaps = int(np.sum(piv != np.arange(piv.shape[0])))
    sign = (-1) ** swaps * int(np.prod(np.sign(diagonal)))
    value = float(np.sum(np.log(np.abs(diagonal))))
    if sign <= 0:
        raise SingularHessianError("Hessian determinant is negative", log_determinant=value)
    if not math.isfinite(value) or value <= LOG_DETERMINANT_FLOOR:
        raise SingularHessianError(
            f"Hessian determinant is numerically zero (log det {value:.3g})",
            log_determinant=value,
        )
    return value


def compensator_increments(theta: NodeParams, gamma: Structure, cache: HistoryCache) -> np.ndarray:
    """
    Lambda_i(t^i_l) - Lambda_i(t^i_{l-1}) for every event of node i, with
    Lambda_i(0) = 0 and

        Lambda_i(t) = mu_i t + sum_j (alpha_ij / beta_ij) (N_j(t-) - A_ij(t))

    Under the true model these are unit exponential.
    """
    mu, alpha, active = _split(theta, gamma, cache)
    values = mu * cache.event_times
    if active:
        excitation = cache.counts_before[:, active] - cache.A[:, active]
        values = values + excitation @ (alpha / cache.beta_row[active])
    return np.diff(np.concatenate(([0.0], values)))


def _full_row(model: HawkesModel, node: int) -> Tuple[NodeParams, Structure]:
    gamma = Structure((1,) * model.dims)
    return NodeParams(mu=model.mu[node], alpha=tuple(model.alpha[node])), gamma


def _check_dims(model: HawkesModel, data: EventData) -> None:
    if model.dims != data.dims:
        raise ValidationError(f"Model has {model.dims} nodes but the data has {data.dims}")


@dataclass(frozen=True)
class KSResult:
    """Time-rescaling goodness of fit for one node."""

    node: int
    n_events: int
    statistic: float
    pvalue: float


def time_rescaling_ks(model: HawkesModel, data: EventData) -> List[KSResult]:
    """
    Kolmogorov-Smirnov test of the rescaled inter-event times against Exp(1).

    Nodes with fewer than two events get NaN statistics.
    """
    _check_dims(model, data)
    results = []
    for node in range(data.dims):
        cache = build_cache(data, node, model.beta[node])
        if cache.n_events < 2:
            results.append(KSResult(node, cache.n_events, math.nan, math.nan))
            continue
        theta, gamma = _full_row(model, node)
        increments = compensator_increments(theta, gamma, cache)
        test = stats.kstest(increments, "expon")
        results.append(
            KSResult(node, cache.n_events, float(test.statistic), float(test.pvalue))
        )
        logger.debug(
            f"Node {node + 1}: KS statistic {test.statistic:.4f}, p-value {test.pvalue:.4f}"
        )
    return results


def joint_nll(model: HawkesModel, data: EventData) -> float:
    """Joint NLL as the sum of per-node NLLs, summed in node order."""
    _check_dims(model, data)
    total = 0.0
    for node in range(data.dims):
        theta, gamma = _full_row(model, node)
        total += nll_node(theta, gamma, build_cache(data, node, model.beta[node]))
    return total


def joint_hessian(model: HawkesModel, data: EventData) -> np.ndarray:
    """Block-diagonal Hessian over all nodes with full structures."""
    _check_dims(model, data)
    blocks = []
    for node in range(data.dims):
        theta, gamma = _full_row(model, node)
        blocks.append(hessian_node(theta, gamma, build_cache(data, node, model.beta[node])))
    return linalg.block_diag(*blocks)

"""
Per-node structure search and graph assembly.

For every node i the search enumerates the candidate parent sets gamma_i
(all of {0,1}^p, or those with at most m parents), fits each one and keeps
the structure minimizing the configured criterion. Nodes are independent
and may run on a process pool; rows are assembled by node index so the
result does not depend on scheduling.
"""

import itertools
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Dict, Iterator, List, Optional, Protocol, Sequence, Tuple, Union

import numpy as np
import pandas as pd
from scipy import special

from hawkes_mml.config.constants import (
    DEFAULT_CRITERION,
    DEFAULT_LATTICE_MODE,
    DEFAULT_THRESHOLD,
    MML_PRIOR_KINDS,
    PARAM_FLOOR,
)
from hawkes_mml.core.criteria import CriterionValue, graph_message_length
from hawkes_mml.core.estimation import OptimizerConfig
from hawkes_mml.core.events import EventData, Graph, NodeParams, Structure
from hawkes_mml.core.likelihood import HistoryCache, build_cache
from hawkes_mml.core.priors import PriorSpec
from hawkes_mml.utils.errors import (
    HawkesMMLError,
    NumericalError,
    SearchError,
    ValidationError,
)
from hawkes_mml.utils.logging import get_logger
from hawkes_mml.utils.validation import validate_max_parents, validate_workers

logger = get_logger("search")

STATUS_OK = "ok"
STATUS_DEGENERATE = "degenerate"
STATUS_FAILED = "failed"


@dataclass(frozen=True)
class SearchConfig:
    """
    Settings of one inference run.

    Attributes:
        criterion: Selector name (mml-u, mml-e, bic, aic, mle-ms, mle-thr, rand)
        prior: Prior used by the MML selectors; None picks the sparse preset
        max_parents: Bound m on parents per node, None for all 2^p structures
        optimizer: MAP optimizer settings
        workers: Process-pool size over nodes
        lattice: Lattice-term mode of the MML criterion
        threshold: Cut-off of the thresholded-MLE rule
        seed: Seed for optimizer restarts and the random baseline
    """

    criterion: str = DEFAULT_CRITERION
    prior: Optional[PriorSpec] = None
    max_parents: Optional[int] = None
    optimizer: OptimizerConfig = field(default_factory=OptimizerConfig)
    workers: int = 1
    lattice: str = DEFAULT_LATTICE_MODE
    threshold: float = DEFAULT_THRESHOLD
    seed: int = 0

    def __post_init__(self) -> None:
        validate_workers(self.workers)
        kind = MML_PRIOR_KINDS.get(self.criterion)
        if kind is not None and self.prior is not None and self.prior.kind != kind:
            raise ValidationError(
                f"Criterion {self.criterion} takes a {kind} prior, got {self.prior.kind}"
            )

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "SearchConfig":
        prior = data.get("prior")
        return cls(
            criterion=data.get("criterion", DEFAULT_CRITERION),
            prior=PriorSpec.from_dict(prior) if prior else None,
            max_parents=data.get("max_parents"),
            optimizer=OptimizerConfig.from_dict(data.get("optimizer", {})),
            workers=int(data.get("workers", 1)),
            lattice=data.get("lattice", DEFAULT_LATTICE_MODE),
            threshold=float(data.get("threshold", DEFAULT_THRESHOLD)),
            seed=int(data.get("seed", 0)),
        )

    def to_dict(self) -> Dict[str, Any]:
        return {
            "criterion": self.criterion,
            "prior": self.prior.to_dict() if self.prior else None,
            "max_parents": self.max_parents,
            "optimizer": self.optimizer.to_dict(),
            "workers": self.workers,
            "lattice": self.lattice,
            "threshold": self.threshold,
            "seed": self.seed,
        }


@dataclass(frozen=True)
class NodeFit:
    """Fit of one (node, structure) pair."""

    gamma: Structure
    theta: Optional[NodeParams]
    criterion: Optional[CriterionValue]
    status: str = STATUS_OK
    message: str = ""

    @property
    def total(self) -> float:
        if self.status != STATUS_OK or self.criterion is None:
            return math.inf
        return self.criterion.total


@dataclass(frozen=True)
class NodeSearchResult:
    """Selected structure of one node and every fit that was evaluated."""

    node: int
    gamma: Structure
    fits: Tuple[NodeFit, ...]
    status: str = STATUS_OK

    @property
    def selected(self) -> Optional[NodeFit]:
        for fit in self.fits:
            if fit.gamma == self.gamma:
                return fit
        return None

    @property
    def evaluated(self) -> int:
        return len(self.fits)


@dataclass(frozen=True)
class InferenceResult:
    """Inferred graph with the per-node search results behind it."""

    graph: Graph
    nodes: Tuple[NodeSearchResult, ...]
    config: SearchConfig

    def message_length(self) -> float:
        """Sum of the selected criterion totals; NaN if some node has none."""
        selected = [n.selected for n in self.nodes]
        values = [s.criterion for s in selected if s is not None and s.criterion is not None]
        if len(values) != len(self.nodes):
            return math.nan
        return graph_message_length(values)

    def diagnostics(self) -> pd.DataFrame:
        """One row per evaluated (node, structure) with criterion parts."""
        rows = []
        for result in self.nodes:
            for fit in result.fits:
                parts = fit.criterion.to_dict() if fit.criterion else {}
                rows.append(
                    {
                        "node": result.node + 1,
                        "structure": fit.gamma.label(),
                        "k": fit.gamma.k,
                        "selected": fit.gamma == result.gamma,
                        "status": fit.status,
                        "mu": fit.theta.mu if fit.theta else math.nan,
                        "alpha": " ".join(f"{a:.10g}" for a in fit.theta.alpha)
                        if fit.theta else "",
                        "fit": parts.get("fit", math.nan),
                        "prior": parts.get("prior", math.nan),
                        "complexity": parts.get("complexity", math.nan),
                        "lattice": parts.get("lattice", math.nan),
                        "preamble": parts.get("preamble", math.nan),
                        "total": parts.get("total", math.nan),
                        "message": fit.message,
                    }
                )
        return pd.DataFrame(rows)


class StructureEvaluator(Protocol):
    """Anything that can fit and score one structure of one node."""

    def evaluate(self, cache: HistoryCache, gamma: Structure, config: SearchConfig) -> NodeFit:
        ...


def count_structures(p: int, max_parents: Optional[int] = None) -> int:
    """Number of candidate structures per node: sum_{k <= m} C(p, k)."""
    m = p if max_parents is None else max_parents
    return int(sum(special.comb(p, k, exact=True) for k in range(m + 1)))


def enumerate_structures(p: int, max_parents: Optional[int] = None) -> Iterator[Structure]:
    """Structures in tie-break order: fewer parents first, then smaller indices."""
    m = p if max_parents is None else max_parents
    for k in range(m + 1):
        for indices in itertools.combinations(range(p), k):
            yield Structure.from_indices(p, indices)


def degenerate_result(node: int, dims: int, message: str) -> NodeSearchResult:
    """Empty structure for a node that cannot support any parents."""
    gamma = Structure.empty(dims)
    fit = NodeFit(
        gamma=gamma,
        theta=NodeParams(mu=PARAM_FLOOR),
        criterion=None,
        status=STATUS_DEGENERATE,
        message=message,
    )
    return NodeSearchResult(node=node, gamma=gamma, fits=(fit,), status=STATUS_DEGENERATE)


def search_node(
    cache: HistoryCache,
    config: SearchConfig,
    evaluator: StructureEvaluator,
) -> NodeSearchResult:
    """
    Evaluate every candidate structure of one node and keep the argmin.

    Structures whose evaluation fails numerically are recorded as failed and
    skipped. Ties keep the first structure in enumeration order.

    Raises:
        SearchError: If no structure could be evaluated
    """
    node = cache.node
    p = cache.dims
    if cache.n_events == 0:
        logger.warning(f"Node {node + 1} has no events; restricted to the empty structure")
        return degenerate_result(node, p, "node has no events")

    fits: List[NodeFit] = []
    best: Optional[NodeFit] = None
    for gamma in enumerate_structures(p, config.max_parents):
        try:
            fit = evaluator.evaluate(cache, gamma, config)
        except (NumericalError, ValidationError) as e:
            fit = NodeFit(gamma, None, None, STATUS_FAILED, str(e))
        if fit.status == STATUS_OK and not math.isfinite(fit.total):
            fit = NodeFit(gamma, fit.theta, fit.criterion, STATUS_FAILED, "criterion is not finite")
        fits.append(fit)
        logger.debug(
            f"Node {node + 1} structure {gamma.label()}: status={fit.status} total={fit.total:.10g}"
        )
        if fit.status == STATUS_OK and (best is None or fit.total < best.total):
            best = fit

    failed = sum(1 for f in fits if f.status == STATUS_FAILED)
    if failed:
        logger.warning(f"Node {node + 1}: skipped {failed} of {len(fits)} structures")
    if best is None:
        raise SearchError(node, f"all {len(fits)} structures failed")
    logger.debug(f"Node {node + 1}: selected {best.gamma.label()} (total {best.total:.10g})")
    return NodeSearchResult(node=node, gamma=best.gamma, fits=tuple(fits))


def decay_matrix(beta: Union[float, Sequence[Sequence[float]], np.ndarray], dims: int) -> np.ndarray:
    """Broadcast a scalar decay constant, or check a p x p matrix."""
    matrix = np.asarray(beta, dtype=float)
    if matrix.ndim == 0:
        matrix = np.full((dims, dims), float(matrix))
    if matrix.shape != (dims, dims):
        raise ValidationError(f"Decay matrix must be {dims}x{dims}, got shape {matrix.shape}")
    if not np.all(np.isfinite(matrix)) or np.any(matrix <= 0):
        raise ValidationError("Decay constants beta_ij must be finite and > 0")
    return matrix


def _node_task(args: Tuple[EventData, int, np.ndarray, SearchConfig]) -> NodeSearchResult:
    data, node, beta_row, config = args
    from hawkes_mml.selectors.registry import get_selector

    selector = get_selector(config.criterion)
    try:
        return selector.select_node(build_cache(data, node, beta_row), config)
    except SearchError:
        raise
    except HawkesMMLError as e:
        raise SearchError(node, str(e)) from e


def run_search(
    data: EventData,
    config: SearchConfig,
    beta: Union[float, np.ndarray] = 1.0,
) -> InferenceResult:
    """
    Infer the connectivity graph with the configured selector.

    Args:
        data: Validated event data
        config: Search settings
        beta: Known decay constants, scalar or p x p

    Returns:
        InferenceResult with the graph and per-node diagnostics

    Raises:
        UnknownSelectorError: If the criterion is not registered
        SearchError: If some node fails, carrying its index
    """
    from hawkes_mml.selectors.registry import get_selector

    get_selector(config.criterion)
    validate_max_parents(config.max_parents, data.dims)
    decay = decay_matrix(beta, data.dims)
    tasks = [(data, node, decay[node], config) for node in range(data.dims)]

    if config.workers == 1 or data.dims == 1:
        results = [_node_task(task) for task in tasks]
    else:
        with ProcessPoolExecutor(max_workers=min(config.workers, data.dims)) as pool:
            results = list(pool.map(_node_task, tasks))

    results.sort(key=lambda r: r.node)
    graph = Graph.from_structures([r.gamma for r in results])
    for result in results:
        logger.info(f"Node {result.node + 1}: parents {result.gamma.label()} ({result.status})")
    return InferenceResult(graph=graph, nodes=tuple(results), config=config)


def infer_graph(
    data: EventData,
    config: SearchConfig,
    beta: Union[float, np.ndarray] = 1.0,
) -> Graph:
    """Adjacency whose row i is the structure selected for node i."""
    return run_search(data, config, beta).graph

"""Reference selectors: unpenalized MLE, thresholded MLE and random parents."""

from hawkes_mml.core.criteria import CriterionValue, mle_thr_rule, nll_criterion, rand_rule
from hawkes_mml.core.estimation import fit_map
from hawkes_mml.core.events import NodeParams, Structure
from hawkes_mml.core.likelihood import HistoryCache
from hawkes_mml.core.search import (
    NodeFit,
    NodeSearchResult,
    SearchConfig,
    degenerate_result,
)
from hawkes_mml.selectors.base import ModelSelectionSelector, SelectorBase
from hawkes_mml.utils.logging import get_logger

logger = get_logger("selectors")


class MLESelector(ModelSelectionSelector):
    """Picks the structure with the smallest NLL (usually the full one)."""

    @property
    def name(self) -> str:
        return "mle-ms"

    @property
    def description(self) -> str:
        return "Maximum likelihood model selection without a complexity penalty"

    def score(
        self,
        theta: NodeParams,
        gamma: Structure,
        cache: HistoryCache,
        config: SearchConfig,
    ) -> CriterionValue:
        return nll_criterion(theta, gamma, cache)


class ThresholdSelector(SelectorBase):
    """Fits all parents by MLE, then keeps those with alpha_ij above the threshold."""

    @property
    def name(self) -> str:
        return "mle-thr"

    @property
    def description(self) -> str:
        return "Full maximum likelihood fit with the influence weights thresholded"

    def select_node(self, cache: HistoryCache, config: SearchConfig) -> NodeSearchResult:
        if cache.n_events == 0:
            return degenerate_result(cache.node, cache.dims, "node has no events")
        full = Structure((1,) * cache.dims)
        theta, _ = fit_map(cache, full, None, config.optimizer, config.seed)
        gamma = mle_thr_rule(theta.alpha, config.threshold)
        logger.debug(f"Node {cache.node + 1}: alpha_hat {theta.alpha} -> {gamma.label()}")
        fits = (
            NodeFit(gamma=full, theta=theta, criterion=nll_criterion(theta, full, cache)),
        )
        if gamma != full:
            fits = fits + (NodeFit(gamma=gamma, theta=None, criterion=None),)
        return NodeSearchResult(node=cache.node, gamma=gamma, fits=fits)


class RandomSelector(SelectorBase):
    """One parent per node, placed uniformly at random from the seed."""

    @property
    def name(self) -> str:
        return "rand"

    @property
    def description(self) -> str:
        return "Random baseline with exactly one parent per node"

    def select_node(self, cache: HistoryCache, config: SearchConfig) -> NodeSearchResult:
        gamma = rand_rule(cache.dims, config.seed).row(cache.node)
        fit = NodeFit(gamma=gamma, theta=None, criterion=None)
        return NodeSearchResult(node=cache.node, gamma=gamma, fits=(fit,))


SELECTORS = [MLESelector, ThresholdSelector, RandomSelector]

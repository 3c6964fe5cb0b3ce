"""Base selector interface for hawkes-mml."""

from abc import ABC, abstractmethod
from typing import Optional

from hawkes_mml.core.criteria import CriterionValue
from hawkes_mml.core.estimation import fit_map
from hawkes_mml.core.events import NodeParams, Structure
from hawkes_mml.core.likelihood import HistoryCache
from hawkes_mml.core.priors import PriorSpec
from hawkes_mml.core.search import NodeFit, NodeSearchResult, SearchConfig, search_node


class SelectorBase(ABC):
    """
    Base class for all structure selectors.

    A selector decides the parent set of one node from that node's history
    cache. Selectors are stateless; the registry keeps one instance each.
    """

    @property
    @abstractmethod
    def name(self) -> str:
        """
        Unique CLI name of the selector.

        Returns:
            Selector name (e.g., "mml-u", "bic")
        """
        ...

    @property
    @abstractmethod
    def description(self) -> str:
        """
        Human-readable description of the selector.

        Returns:
            Description string
        """
        ...

    @abstractmethod
    def select_node(self, cache: HistoryCache, config: SearchConfig) -> NodeSearchResult:
        """
        Select the parents of the cache's node.

        Args:
            cache: History cache of the node
            config: Search settings

        Returns:
            Selected structure with the fits behind it
        """
        ...


class ModelSelectionSelector(SelectorBase):
    """
    Selector that fits every candidate structure and keeps the one with the
    smallest criterion value.
    """

    def node_prior(self, config: SearchConfig) -> Optional[PriorSpec]:
        """Prior used for the MAP fit; None fits the plain MLE."""
        return None

    @abstractmethod
    def score(
        self,
        theta: NodeParams,
        gamma: Structure,
        cache: HistoryCache,
        config: SearchConfig,
    ) -> CriterionValue:
        """Criterion of a fitted structure."""
        ...

    def evaluate(self, cache: HistoryCache, gamma: Structure, config: SearchConfig) -> NodeFit:
        theta, _ = fit_map(cache, gamma, self.node_prior(config), config.optimizer, config.seed)
        return NodeFit(gamma=gamma, theta=theta, criterion=self.score(theta, gamma, cache, config))

    def select_node(self, cache: HistoryCache, config: SearchConfig) -> NodeSearchResult:
        return search_node(cache, config, self)

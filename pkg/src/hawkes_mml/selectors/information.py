"""BIC and AIC selectors on the negative-log-likelihood scale."""

from hawkes_mml.core.criteria import CriterionValue, aic_criterion, bic_criterion
from hawkes_mml.core.events import NodeParams, Structure
from hawkes_mml.core.likelihood import HistoryCache
from hawkes_mml.core.search import SearchConfig
from hawkes_mml.selectors.base import ModelSelectionSelector


class BICSelector(ModelSelectionSelector):
    @property
    def name(self) -> str:
        return "bic"

    @property
    def description(self) -> str:
        return "Bayesian information criterion, penalty (k+1)/2 log n_i"

    def score(
        self,
        theta: NodeParams,
        gamma: Structure,
        cache: HistoryCache,
        config: SearchConfig,
    ) -> CriterionValue:
        return bic_criterion(theta, gamma, cache)


class AICSelector(ModelSelectionSelector):
    @property
    def name(self) -> str:
        return "aic"

    @property
    def description(self) -> str:
        return "Akaike information criterion, penalty k+1"

    def score(
        self,
        theta: NodeParams,
        gamma: Structure,
        cache: HistoryCache,
        config: SearchConfig,
    ) -> CriterionValue:
        return aic_criterion(theta, gamma, cache)


SELECTORS = [BICSelector, AICSelector]

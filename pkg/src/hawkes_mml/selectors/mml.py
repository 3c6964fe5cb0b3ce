"""Message-length selectors under the uniform and exponential priors."""

from hawkes_mml.config.constants import DEFAULT_PRIOR_PRESET
from hawkes_mml.core.criteria import CriterionValue, mml_criterion
from hawkes_mml.core.events import NodeParams, Structure
from hawkes_mml.core.likelihood import HistoryCache
from hawkes_mml.core.priors import PriorSpec
from hawkes_mml.core.search import SearchConfig
from hawkes_mml.selectors.base import ModelSelectionSelector
from hawkes_mml.utils.errors import ValidationError


class _MessageLengthSelector(ModelSelectionSelector):
    prior_kind = "uniform"

    def node_prior(self, config: SearchConfig) -> PriorSpec:
        if config.prior is None:
            return PriorSpec.from_preset(self.prior_kind, DEFAULT_PRIOR_PRESET)
        if config.prior.kind != self.prior_kind:
            raise ValidationError(
                f"{self.name} takes a {self.prior_kind} prior, got {config.prior.kind}"
            )
        return config.prior

    def score(
        self,
        theta: NodeParams,
        gamma: Structure,
        cache: HistoryCache,
        config: SearchConfig,
    ) -> CriterionValue:
        return mml_criterion(theta, gamma, cache, self.node_prior(config), config.lattice)


class UniformMMLSelector(_MessageLengthSelector):
    prior_kind = "uniform"

    @property
    def name(self) -> str:
        return "mml-u"

    @property
    def description(self) -> str:
        return "Minimum message length with a uniform prior on [0, b]"


class ExponentialMMLSelector(_MessageLengthSelector):
    prior_kind = "exponential"

    @property
    def name(self) -> str:
        return "mml-e"

    @property
    def description(self) -> str:
        return "Minimum message length with an exponential prior of rate c"


SELECTORS = [UniformMMLSelector, ExponentialMMLSelector]

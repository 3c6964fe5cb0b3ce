"""
Selection criteria for a (node, structure) pair, all in nats.

The message-length criterion of a structure gamma_i with k active parents is

    I = l_i(theta) - log pi(theta) + 1/2 log|H(theta)| + lattice(k) + preamble(p, k)

evaluated at the MAP estimate. BIC and AIC are expressed on the same
negative-log-likelihood scale so that any of them can drive the search.
"""

import math
from dataclasses import dataclass, field
from typing import Dict, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from scipy import special

from hawkes_mml.config.constants import (
    DEFAULT_LATTICE_MODE,
    DEFAULT_THRESHOLD,
    EULER_MASCHERONI,
    KAPPA_LIMIT,
    KNOWN_KAPPA,
    LATTICE_MODES,
)
from hawkes_mml.core.events import Graph, NodeParams, Structure
from hawkes_mml.core.likelihood import HistoryCache, hessian_node, logdet_hessian, nll_node
from hawkes_mml.core.priors import PriorSpec, neg_log_prior
from hawkes_mml.utils.errors import StructureEvaluationError, ValidationError

# psi(1)
DIGAMMA_ONE = -EULER_MASCHERONI


@dataclass(frozen=True)
class CriterionValue:
    """
    Criterion value split into its parts.

    total is summed in field order: fit, prior, complexity, lattice, preamble.
    """

    fit: float
    prior: float = 0.0
    complexity: float = 0.0
    lattice: float = 0.0
    preamble: float = 0.0
    total: float = field(init=False)

    def __post_init__(self) -> None:
        total = self.fit
        total += self.prior
        total += self.complexity
        total += self.lattice
        total += self.preamble
        object.__setattr__(self, "total", float(total))

    @property
    def is_finite(self) -> bool:
        return math.isfinite(self.total)

    def to_dict(self) -> Dict[str, float]:
        return {
            "fit": self.fit,
            "prior": self.prior,
            "complexity": self.complexity,
            "lattice": self.lattice,
            "preamble": self.preamble,
            "total": self.total,
        }


def structure_preamble(p: int, k: int) -> float:
    """
    Code length of the structure: log C(p, k) + log(p + 1).

    The binomial term is evaluated as gammaln(p+1) - (gammaln(k+1) + gammaln(p-k+1))
    so the value at k equals the value at p - k exactly.
    """
    if not 0 <= k <= p:
        raise ValidationError(f"Parent count k={k} outside 0..p={p}")
    binomial = special.gammaln(p + 1) - (special.gammaln(k + 1) + special.gammaln(p - k + 1))
    return float(binomial + math.log(p + 1))


def kappa_bounds(k: int) -> Tuple[float, float]:
    """
    Lower and upper bounds on the normalized second moment kappa_k of the
    optimal k-dimensional quantizing lattice. Both tend to 1/(2 pi e).
    """
    if k < 2:
        raise ValidationError(f"kappa bounds need k >= 2, got {k}")
    common = math.exp((2.0 / k) * special.gammaln(k / 2.0 + 1.0))
    lower = common / (math.pi * (k + 2))
    upper = common * math.exp(special.gammaln(2.0 / k + 1.0)) / (math.pi * k)
    return lower, upper


def _kappa_term(k: int, kappa: float) -> float:
    return 0.5 * k * (math.log(kappa) + 1.0)


def lattice_terms(k: int, mode: str = DEFAULT_LATTICE_MODE) -> float:
    """
    Lattice-constant part of the assertion length, (k/2)(log kappa_k + 1).

    Modes:
        digamma: -(k/2) log(2 pi) + 1/2 log(k pi) + psi(1)
        lower / upper: kappa_k from the bound (exact 1/12 at k = 1)

    A structure without parents contributes 0.
    """
    if k < 0:
        raise ValidationError(f"Parent count must be >= 0, got {k}")
    if mode not in LATTICE_MODES:
        raise ValidationError(
            f"Unknown lattice mode '{mode}', expected one of {', '.join(LATTICE_MODES)}"
        )
    if k == 0:
        return 0.0
    if mode == "digamma":
        return -0.5 * k * math.log(2.0 * math.pi) + 0.5 * math.log(k * math.pi) + DIGAMMA_ONE
    if k == 1:
        return _kappa_term(1, KNOWN_KAPPA[1])
    lower, upper = kappa_bounds(k)
    return _kappa_term(k, lower if mode == "lower" else upper)


def implied_kappa(k: int) -> float:
    """kappa_k implied by the digamma approximation."""
    return math.exp(2.0 * lattice_terms(k, "digamma") / k - 1.0)


def kappa_table(k_max: int) -> pd.DataFrame:
    """
    Rows (k, lower, upper, limit, known, digamma) for k = 1..k_max.

    Bounds are NaN at k = 1; known is NaN where no value is tabulated.
    """
    if k_max < 1:
        raise ValidationError(f"k_max must be >= 1, got {k_max}")
    rows = []
    for k in range(1, k_max + 1):
        lower, upper = kappa_bounds(k) if k >= 2 else (math.nan, math.nan)
        rows.append(
            {
                "k": k,
                "lower": lower,
                "upper": upper,
                "limit": KAPPA_LIMIT,
                "known": KNOWN_KAPPA.get(k, math.nan),
                "digamma": implied_kappa(k),
            }
        )
    return pd.DataFrame(rows)


def mml_criterion(
    theta_hat: NodeParams,
    gamma: Structure,
    cache: HistoryCache,
    prior: PriorSpec,
    lattice_mode: str = DEFAULT_LATTICE_MODE,
) -> CriterionValue:
    """
    Message length of node i under structure gamma at the MAP estimate.

    Raises:
        SingularHessianError: If the Hessian determinant is numerically zero
    """
    fit = nll_node(theta_hat, gamma, cache)
    prior_part = neg_log_prior(prior, theta_hat)
    complexity = 0.5 * logdet_hessian(hessian_node(theta_hat, gamma, cache))
    return CriterionValue(
        fit=fit,
        prior=prior_part,
        complexity=complexity,
        lattice=lattice_terms(gamma.k, lattice_mode),
        preamble=structure_preamble(cache.dims, gamma.k),
    )


def bic_criterion(theta_hat: NodeParams, gamma: Structure, cache: HistoryCache) -> CriterionValue:
    """nll + (k + 1)/2 log n_i, with n_i the event count of the node."""
    n_i = cache.n_events
    if n_i == 0:
        if gamma.k > 0:
            raise StructureEvaluationError(
                f"BIC undefined for node {cache.node + 1} with no events and k={gamma.k}"
            )
        return CriterionValue(fit=nll_node(theta_hat, gamma, cache))
    penalty = 0.5 * (gamma.k + 1) * math.log(n_i)
    return CriterionValue(fit=nll_node(theta_hat, gamma, cache), complexity=penalty)


def aic_criterion(theta_hat: NodeParams, gamma: Structure, cache: HistoryCache) -> CriterionValue:
    """nll + (k + 1)."""
    return CriterionValue(fit=nll_node(theta_hat, gamma, cache), complexity=float(gamma.k + 1))


def nll_criterion(theta_hat: NodeParams, gamma: Structure, cache: HistoryCache) -> CriterionValue:
    """Plain NLL, no penalty (MLE model selection)."""
    return CriterionValue(fit=nll_node(theta_hat, gamma, cache))


def mle_thr_rule(alpha_hat: Sequence[float], threshold: float = DEFAULT_THRESHOLD) -> Structure:
    """Keep parent j iff alpha_hat_j > threshold (strict)."""
    alpha = np.asarray(alpha_hat, dtype=float)
    return Structure(tuple(int(a > threshold) for a in alpha))


def rand_rule(p: int, seed: Optional[int]) -> Graph:
    """One uniformly placed parent per row."""
    rng = np.random.default_rng(seed)
    adjacency = np.zeros((p, p), dtype=np.int8)
    adjacency[np.arange(p), rng.integers(0, p, size=p)] = 1
    return Graph(adjacency)


def graph_message_length(values: Sequence[CriterionValue]) -> float:
    """Total message length of a graph: nodes are coded independently."""
    return float(sum(v.total for v in values))

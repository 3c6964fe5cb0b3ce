"""Scoring inferred graphs against ground truth."""

from dataclasses import asdict, dataclass
from typing import Any, Dict, NamedTuple, Sequence

import numpy as np

from hawkes_mml.core.events import Graph
from hawkes_mml.utils.errors import ValidationError


@dataclass(frozen=True)
class ScoreReport:
    """Edge-recovery scores of one predicted graph."""

    precision: float
    recall: float
    f1: float
    tp_count: int
    predicted_count: int
    truth_count: int

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


class Aggregate(NamedTuple):
    mean_f1: float
    std_f1: float
    mean_tp_rate: float


def score(predicted: Graph, truth: Graph) -> ScoreReport:
    """
    Precision, recall and F1 of the predicted edges.

    Conventions: two empty graphs score 1 everywhere; otherwise a rate with
    a zero denominator is 0, and F1 is 0 unless precision + recall > 0.

    Raises:
        ValidationError: If the graphs have different dimensions
    """
    if predicted.dims != truth.dims:
        raise ValidationError(
            f"Cannot score a {predicted.dims}-node graph against a {truth.dims}-node truth"
        )
    tp = int(np.sum((predicted.adjacency == 1) & (truth.adjacency == 1)))
    n_pred = predicted.edge_count
    n_true = truth.edge_count
    if n_pred == 0 and n_true == 0:
        return ScoreReport(1.0, 1.0, 1.0, 0, 0, 0)
    precision = tp / n_pred if n_pred else 0.0
    recall = tp / n_true if n_true else 0.0
    f1 = 2.0 * precision * recall / (precision + recall) if precision + recall > 0 else 0.0
    return ScoreReport(precision, recall, f1, tp, n_pred, n_true)


def aggregate(reports: Sequence[ScoreReport]) -> Aggregate:
    """
    Sample mean and standard deviation (divisor N - 1) of F1, plus the mean
    recall used as the TP rate. A single report has standard deviation 0.

    Raises:
        ValidationError: If no reports are given
    """
    if not reports:
        raise ValidationError("Cannot aggregate an empty list of score reports")
    f1 = np.array([r.f1 for r in reports])
    std = float(np.std(f1, ddof=1)) if f1.size > 1 else 0.0
    return Aggregate(
        mean_f1=float(np.mean(f1)),
        std_f1=std,
        mean_tp_rate=float(np.mean([r.recall for r in reports])),
    )

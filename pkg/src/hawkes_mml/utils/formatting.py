"""Output formatting utilities for hawkes-mml."""

from typing import Mapping, Optional, Protocol, Sequence

import pandas as pd


class ScoreLike(Protocol):
    """Protocol for score reports (works with ScoreReport and test doubles)."""

    precision: float
    recall: float
    f1: float
    tp_count: int
    predicted_count: int
    truth_count: int


def format_score(report: ScoreLike) -> str:
    """
    One-line human-readable score.

    Args:
        report: Score report

    Returns:
        e.g. "f1=0.8000 precision=1.0000 recall=0.6667 tp=2 predicted=2 truth=3"
    """
    return (
        f"f1={report.f1:.4f} precision={report.precision:.4f} recall={report.recall:.4f} "
        f"tp={report.tp_count} predicted={report.predicted_count} truth={report.truth_count}"
    )


def format_table(frame: pd.DataFrame, float_digits: int = 3) -> str:
    """Fixed-width rendering of a result table for the terminal."""
    if frame.empty:
        return "(no rows)"
    return frame.to_string(index=False, float_format=lambda v: f"{v:.{float_digits}f}")


def format_event_counts(names: Sequence[str], counts: Sequence[int]) -> str:
    """Per-node event counts, one "name<TAB>count" line each."""
    return "\n".join(f"{name}\t{count}" for name, count in zip(names, counts))


def format_adjacency(
    rows: Sequence[Sequence[int]], labels: Optional[Mapping[int, str]] = None
) -> str:
    """Adjacency as text, one row per target node."""
    labels = labels or {}
    width = max((len(v) for v in labels.values()), default=0)
    lines = []
    for i, row in enumerate(rows):
        label = labels.get(i, str(i + 1))
        lines.append(f"{label:>{width}} " + " ".join(str(int(v)) for v in row))
    return "\n".join(lines)

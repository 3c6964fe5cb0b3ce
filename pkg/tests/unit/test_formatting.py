"""Tests for terminal formatting helpers."""

from dataclasses import dataclass

import pandas as pd

from hawkes_mml.utils.formatting import (
    format_adjacency,
    format_event_counts,
    format_score,
    format_table,
)


@dataclass
class _Report:
    precision: float = 1.0
    recall: float = 2 / 3
    f1: float = 0.8
    tp_count: int = 2
    predicted_count: int = 2
    truth_count: int = 3


def test_format_score():
    report = _Report()
    assert format_score(report) == (
        "f1=0.8000 precision=1.0000 recall=0.6667 tp=2 predicted=2 truth=3"
    )


def test_format_table():
    assert format_table(pd.DataFrame()) == "(no rows)"
    text = format_table(pd.DataFrame({"method": ["bic"], "mean_f1": [0.12345]}))
    assert "0.123" in text
    assert "bic" in text


def test_format_event_counts():
    assert format_event_counts(["AAA", "BBB"], [3, 0]) == "AAA\t3\nBBB\t0"


def test_format_adjacency():
    assert format_adjacency([[0, 1], [1, 0]]) == "1 0 1\n2 1 0"
    labeled = format_adjacency([[1]], labels={0: "AAA"})
    assert labeled == "AAA 1"

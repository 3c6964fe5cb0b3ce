"""Turning real-valued time series into event streams with a rolling shock rule."""

import math
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional, Sequence, Union

import numpy as np
import pandas as pd
from numpy.lib.stride_tricks import sliding_window_view

from hawkes_mml.config.constants import DEFAULT_INGEST_HORIZON, DEFAULT_QUANTILE, DEFAULT_WINDOW
from hawkes_mml.core.events import EventData, validate_events
from hawkes_mml.utils.errors import ValidationError
from hawkes_mml.utils.logging import get_logger
from hawkes_mml.utils.validation import validate_horizon, validate_quantile, validate_window

logger = get_logger("ingest")


@dataclass(frozen=True)
class SeriesTable:
    """Equal-length real-valued series, one column per node, indexed by timestamp."""

    frame: pd.DataFrame

    def __post_init__(self) -> None:
        if self.frame.shape[1] == 0:
            raise ValidationError("Series table has no value columns")
        if self.frame.isna().any().any():
            row, col = np.argwhere(self.frame.isna().to_numpy())[0]
            raise ValidationError(
                f"Missing value in column '{self.frame.columns[col]}' at row {row + 1}"
            )

    @property
    def columns(self) -> List[str]:
        return [str(c) for c in self.frame.columns]

    @property
    def timestamps(self) -> pd.Index:
        return self.frame.index

    def __len__(self) -> int:
        return int(self.frame.shape[0])

    def select(self, columns: Sequence[str]) -> "SeriesTable":
        """Subset of the columns, in the given order."""
        unknown = [c for c in columns if c not in self.frame.columns]
        if unknown:
            raise ValidationError(
                f"Unknown column(s) {unknown}; available: {', '.join(self.columns)}"
            )
        return SeriesTable(self.frame[list(columns)])


def load_csv(
    path: Union[str, Path],
    columns: Optional[Sequence[str]] = None,
    index_column: Optional[str] = None,
    delimiter: str = ",",
) -> SeriesTable:
    """
    Parse a delimited file with a header: an optional date column followed by
    one numeric column per series.

    The first column is used as the index when index_column is not given
    and its values are not numeric.

    Raises:
        ValidationError: On ragged rows, missing or non-numeric cells, or
            unknown columns (errors name the 1-based data row)
    """
    try:
        frame = pd.read_csv(path, sep=delimiter, dtype=str, keep_default_na=False)
    except pd.errors.ParserError as e:
        raise ValidationError(f"Malformed row in {path}: {e}") from None
    except pd.errors.EmptyDataError:
        raise ValidationError(f"{path} is empty") from None

    if index_column is not None:
        if index_column not in frame.columns:
            raise ValidationError(f"Index column '{index_column}' not found in {path}")
        frame = frame.set_index(index_column)
    elif frame.shape[1] > 1 and pd.to_numeric(frame.iloc[:, 0], errors="coerce").isna().any():
        frame = frame.set_index(frame.columns[0])

    values = {}
    for column in frame.columns:
        raw = frame[column].str.strip()
        missing = raw == ""
        if missing.any():
            row = int(np.argmax(missing.to_numpy()))
            raise ValidationError(f"{path}: missing value in column '{column}' at row {row + 1}")
        numeric = pd.to_numeric(raw, errors="coerce")
        if numeric.isna().any():
            row = int(np.argmax(numeric.isna().to_numpy()))
            raise ValidationError(
                f"{path}: non-numeric value {raw.iloc[row]!r} in column '{column}' at row {row + 1}"
            )
        values[column] = numeric.astype(float)

    table = SeriesTable(pd.DataFrame(values, index=frame.index))
    if columns:
        table = table.select(columns)
    logger.debug(f"Loaded {len(table)} rows x {len(table.columns)} series from {path}")
    return table


def shock_indices(series: np.ndarray, window: int, quantile: float) -> np.ndarray:
    """
    Window-end positions u (0-based over the usable range) whose latest value
    ranks among the top ceil(quantile * window) values of its window.

    Values tied with the latest one do not push it down the ranking.
    """
    top = max(1, math.ceil(quantile * window - 1e-12))
    windows = sliding_window_view(np.asarray(series, dtype=float), window)
    latest = windows[:, -1]
    greater = np.sum(windows > latest[:, None], axis=1)
    return np.flatnonzero(greater < top)


def extract_events(
    table: SeriesTable,
    window: int = DEFAULT_WINDOW,
    quantile: float = DEFAULT_QUANTILE,
    horizon: float = DEFAULT_INGEST_HORIZON,
) -> EventData:
    """
    One event stream per column.

    Window-end position u = 0..L-window maps to time T (u + 1) / (L - window + 1),
    so the events fill (0, T].

    Raises:
        ValidationError: If the window exceeds the series length or the
            quantile is outside (0, 1)
    """
    length = len(table)
    window = validate_window(window, length)
    quantile = validate_quantile(quantile)
    horizon = validate_horizon(horizon)
    usable = length - window + 1

    times = []
    for column in table.columns:
        fired = shock_indices(table.frame[column].to_numpy(), window, quantile)
        times.append(np.minimum(horizon * (fired + 1) / usable, horizon))
        logger.info(f"Series '{column}': {fired.size} events")
    return validate_events(times, horizon)

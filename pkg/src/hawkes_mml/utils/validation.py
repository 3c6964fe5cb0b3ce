"""Input validation utilities for hawkes-mml."""

import math
from typing import Optional

from hawkes_mml.utils.errors import ValidationError


def validate_positive(name: str, value: float) -> float:
    """
    Validate that a scalar is finite and strictly positive.

    Args:
        name: Parameter name used in the error message
        value: Value to check

    Returns:
        The value as float

    Raises:
        ValidationError: If the value is not a finite positive number
    """
    try:
        number = float(value)
    except (TypeError, ValueError):
        raise ValidationError(f"{name} must be a number, got {value!r}") from None
    if not math.isfinite(number) or number <= 0:
        raise ValidationError(f"{name} must be finite and > 0, got {value!r}")
    return number


def validate_horizon(horizon: float) -> float:
    """
    Validate an observation horizon T.

    Raises:
        ValidationError: If T is not finite and positive
    """
    return validate_positive("Horizon T", horizon)


def validate_dimension(dims: int) -> int:
    """
    Validate the number of nodes p.

    Raises:
        ValidationError: If p is not a positive integer
    """
    if isinstance(dims, bool) or int(dims) != dims or dims < 1:
        raise ValidationError(f"Dimension p must be a positive integer, got {dims!r}")
    return int(dims)


def validate_max_parents(max_parents: Optional[int], dims: int) -> Optional[int]:
    """
    Validate the expert bound m on parents per node.

    Args:
        max_parents: Bound m, or None for the unrestricted search
        dims: Number of nodes p

    Returns:
        The validated bound

    Raises:
        ValidationError: If m is outside 1..p
    """
    if max_parents is None:
        return None
    if int(max_parents) != max_parents or not 1 <= max_parents <= dims:
        raise ValidationError(
            f"Max parents m must satisfy 1 <= m <= p={dims}, got {max_parents}"
        )
    return int(max_parents)


def validate_quantile(quantile: float) -> float:
    """
    Validate a top-fraction quantile used by the shock rule.

    Raises:
        ValidationError: If the quantile is not a number in (0, 1)
    """
    try:
        number = float(quantile)
    except (TypeError, ValueError):
        raise ValidationError(f"Quantile must be a number, got {quantile!r}") from None
    if not 0.0 < number < 1.0:
        raise ValidationError(f"Quantile must lie in (0, 1), got {quantile}")
    return number


def validate_window(window: int, length: int) -> int:
    """
    Validate a rolling window length against the series length.

    Raises:
        ValidationError: If the window is < 1 or longer than the series
    """
    if int(window) != window or window < 1:
        raise ValidationError(f"Window must be a positive integer, got {window}")
    if window > length:
        raise ValidationError(
            f"Window of {window} samples is larger than the series ({length} samples)"
        )
    return int(window)


def validate_workers(workers: int) -> int:
    """
    Validate a worker-pool size.

    Raises:
        ValidationError: If workers is < 1
    """
    if int(workers) != workers or workers < 1:
        raise ValidationError(f"Worker count must be at least 1, got {workers}")
    return int(workers)

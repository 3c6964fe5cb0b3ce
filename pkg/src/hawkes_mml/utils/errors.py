"""Custom exception classes for hawkes-mml."""

from typing import List, Optional, Sequence

from hawkes_mml.config.constants import (
    EXIT_DATA_ERROR,
    EXIT_NUMERICAL_FAILURE,
    EXIT_USAGE,
)


class HawkesMMLError(Exception):
    """Base exception for hawkes-mml."""

    pass


class ConfigurationError(HawkesMMLError):
    """Configuration error (missing files, invalid YAML, wrong schema version)."""

    pass


class ExperimentNotFoundError(ConfigurationError):
    """
    Experiment preset not found.

    Raised when a requested experiment has no YAML file under
    config/experiments/.
    """

    def __init__(self, name: str, available: Optional[List[str]] = None):
        message = f"Experiment '{name}' not found."
        if available:
            message += f" Available experiments: {', '.join(available)}"
        super().__init__(message)
        self.name = name
        self.available = available or []


class UsageError(HawkesMMLError):
    """Invalid command-line usage (bad flag values, unknown names)."""

    pass


class UnknownSelectorError(UsageError):
    """Requested selection criterion is not registered."""

    def __init__(self, name: str, available: Optional[Sequence[str]] = None):
        message = f"Unknown criterion '{name}'."
        if available:
            message += f" Available criteria: {', '.join(available)}"
        super().__init__(message)
        self.name = name
        self.available = list(available or [])


class ValidationError(HawkesMMLError):
    """Input data validation error."""

    pass


class NumericalError(HawkesMMLError):
    """Numerical failure (non-finite values, singular matrices, divergence)."""

    pass


class SingularHessianError(NumericalError):
    """
    Hessian determinant is non-positive or numerically zero.

    Signals that a structure cannot be scored; the search skips it.
    """

    def __init__(self, message: str, log_determinant: Optional[float] = None):
        super().__init__(message)
        self.log_determinant = log_determinant


class StructureEvaluationError(NumericalError):
    """A criterion could not be evaluated for a (node, structure) pair."""

    pass


class OptimizationError(NumericalError):
    """MAP optimizer did not converge after all restarts."""

    def __init__(self, node: int, structure: str, message: str):
        super().__init__(
            f"Optimizer failed for node {node + 1}, structure {structure}: {message}"
        )
        self.node = node
        self.structure = structure


class SimulationError(NumericalError):
    """Simulation aborted (event cap exceeded or non-finite intensity)."""

    def __init__(self, message: str, events: Optional[int] = None):
        super().__init__(message)
        self.events = events


class SearchError(NumericalError):
    """Structure search failed for a node; carries the node index."""

    def __init__(self, node: int, message: str):
        super().__init__(f"Search failed for node {node + 1}: {message}")
        self.node = node


def exit_code_for(error: BaseException) -> int:
    """
    Map an exception to a CLI exit code.

    Args:
        error: Exception raised while running a command

    Returns:
        1 for usage/configuration errors, 2 for data errors,
        3 for numerical failures
    """
    if isinstance(error, (UsageError, ConfigurationError)):
        return EXIT_USAGE
    if isinstance(error, ValidationError):
        return EXIT_DATA_ERROR
    if isinstance(error, NumericalError):
        return EXIT_NUMERICAL_FAILURE
    if isinstance(error, OSError):
        return EXIT_DATA_ERROR
    return EXIT_USAGE

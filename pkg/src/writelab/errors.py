"""Exception hierarchy shared across the toolkit.

Exit-code mapping used by the CLI: configuration problems exit 1, data
problems (parsing, validation, replay, undefined metrics) exit 2, and
estimation problems (impossible identification, degenerate treatment groups,
failed resampling) exit 3.
"""

from __future__ import annotations


class WritelabError(Exception):
    """Base class for all toolkit errors."""

    exit_code = 1


class ConfigError(WritelabError):
    """Invalid or incomplete run configuration."""

    exit_code = 1


class DataError(WritelabError):
    """Malformed or inconsistent input data."""

    exit_code = 2


class ParseError(DataError):
    """A session log line could not be decoded."""

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class ValidationError(DataError):
    """Structurally valid input violating a documented invariant."""


class ReplayError(DataError):
    """A text delta could not be applied to the reconstructed document."""

    def __init__(self, message: str, event_index: int | None = None):
        if event_index is not None:
            message = f"event {event_index}: {message}"
        super().__init__(message)
        self.event_index = event_index


class LogConsistencyError(DataError):
    """Event ordering that contradicts the suggestion-episode protocol."""


class UndefinedMetricError(DataError):
    """A quality metric is undefined for the given text."""


class GraphError(DataError):
    """Invalid causal graph (cycle, unknown node, bad edge list)."""


class EstimationError(WritelabError):
    """Effect estimation is impossible or failed."""

    exit_code = 3

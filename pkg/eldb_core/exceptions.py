"""Custom exceptions for the broadcast domination lab."""
from typing import Optional


class EldbError(Exception):
    """Base exception for all lab errors."""
    pass


class InvalidParameterError(EldbError):
    """A generator or solver parameter is outside its allowed range."""
    pass


class InvalidInputError(EldbError):
    """Inputs do not fit together (e.g. broadcast length vs vertex count)."""
    pass


class ConnectivityError(EldbError):
    """A connected graph was required but some pair is unreachable."""

    def __init__(self, message: str, pair: Optional[tuple] = None):
        super().__init__(message)
        self.pair = pair


class InstanceTooLargeError(EldbError):
    """Exhaustive enumeration refused because the instance is too big."""
    pass


class PreconditionError(EldbError):
    """An operation was called on input that breaks its precondition."""
    pass


class ConfigError(EldbError):
    """Invalid run configuration, settings or suite definition."""
    pass


class _LineError(EldbError):
    """Error tied to one line of a text input."""

    def __init__(self, message: str, line_number: int = 0, line: str = ""):
        if line_number:
            message = f"line {line_number}: {message} ({line.strip()!r})"
        super().__init__(message)
        self.line_number = line_number
        self.line = line


class GraphFormatError(_LineError):
    """Base error for malformed graph files."""
    pass


class MalformedLineError(GraphFormatError):
    """A line could not be read as the expected integers."""
    pass


class SelfLoopError(GraphFormatError):
    """An edge joins a vertex to itself."""
    pass


class DuplicateEdgeError(GraphFormatError):
    """The same edge is listed twice."""
    pass


class VertexRangeError(GraphFormatError):
    """A vertex id is outside 0..n-1."""
    pass


class EdgeCountError(GraphFormatError):
    """The header edge count does not match the edge lines."""
    pass


class CnfFormatError(_LineError):
    """Base error for malformed DIMACS CNF input."""
    pass


class ClauseWidthError(CnfFormatError):
    """A clause does not have exactly three literals."""
    pass


class RepeatedVariableError(CnfFormatError):
    """A clause mentions the same literal twice."""
    pass


class TautologyError(CnfFormatError):
    """A clause contains a literal and its negation."""
    pass


class VariableRangeError(CnfFormatError):
    """A literal refers to a variable outside 1..n."""
    pass

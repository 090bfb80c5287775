"""Exception types shared across the package."""


class RecnetError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(RecnetError):
    """A malformed line in an edge list, seed list, or mapping file."""

    def __init__(self, message: str, line_number: int | None = None):
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)
        self.line_number = line_number


class EmptyInputError(RecnetError):
    """An input stream contained no usable records."""


class UnknownNodeError(RecnetError):
    """A node token could not be resolved in the target graph or provider."""

    def __init__(self, token: str, where: str = "graph"):
        super().__init__(f"unknown node {token!r} in {where}")
        self.token = token


class ModeError(RecnetError):
    """A metric mode that does not apply to the given graph kind."""


class ConfigError(RecnetError):
    """Invalid parameter combination or out-of-range configuration value."""


class DomainError(RecnetError):
    """The requested quantity is undefined for this input (empty graph, no
    reachable pairs, empty edge set)."""


class FitError(RecnetError):
    """Power-law fitting failed: tail too small or degenerate sample."""


class ProtocolError(RecnetError):
    """Malformed response or exhausted retries on the remote friend-list
    protocol."""


class ConsistencyError(RecnetError):
    """Internal invariant violated between co-produced artifacts (for
    example an edge whose canonical path is missing from its matrix)."""

"""Exception types shared across the package."""


class HyperlineError(Exception):
    """Base class for all errors raised by hyperline."""


class ParseError(HyperlineError, ValueError):
    """Raised when an input file cannot be parsed.

    ``line`` carries the 1-based line number of the offending line when known.
    """

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class DuplicateIncidenceError(ParseError):
    def __init__(self, edge, vertex, line=None):
        self.edge = edge
        self.vertex = vertex
        super().__init__(f"duplicate incidence (edge={edge}, vertex={vertex})", line)


class ResourceLimitError(HyperlineError, MemoryError):
    """An operation would exceed a configured memory cap."""

    def __init__(self, message, estimate=None, cap=None):
        self.estimate = estimate
        self.cap = cap
        super().__init__(message)


class ConvergenceError(HyperlineError, RuntimeError):
    """An iterative solver stopped before reaching its tolerance."""

    def __init__(self, message, residual, iterations=None):
        self.residual = residual
        self.iterations = iterations
        super().__init__(f"{message} (residual={residual:.3e})")


class ConfigError(HyperlineError, ValueError):
    """Invalid or conflicting pipeline configuration."""

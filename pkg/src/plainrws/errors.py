"""Exception types shared across the package."""


class PlainRwsError(Exception):
    """Base class for all package errors."""


class ParseError(PlainRwsError, ValueError):
    """Malformed `.rws`, CSV table, edge list or word input."""

    def __init__(self, message, line=None, source=None):
        self.message = message
        self.line = line
        self.source = source
        super().__init__(str(self))

    def __str__(self):
        where = ""
        if self.source is not None:
            where = f"{self.source}:"
        if self.line is not None:
            where += f"{self.line}:"
        return f"{where} {self.message}" if where else self.message


class PreconditionError(PlainRwsError, ValueError):
    """An operation was called on input violating its documented precondition."""


class NotGeodeticError(PreconditionError):
    """A geodetic-only analysis received a graph with a non-unique geodesic."""


class DisconnectedGraphError(PreconditionError):
    """A connected-only analysis received a disconnected graph."""


class VertexCapExceeded(PlainRwsError, RuntimeError):
    """Ball construction would exceed the configured vertex limit."""

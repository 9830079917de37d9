"""Exception hierarchy shared by all modules."""

from __future__ import annotations


class GraphError(ValueError):
    """Invalid graph, vertex or edge for the requested operation."""


class GraphFormatError(GraphError):
    """Syntax or content error in the graph text format."""

    def __init__(self, message: str, line: int, column: int):
        self.line = line
        self.column = column
        self.reason = message
        super().__init__(f"line {line}, column {column}: {message}")


class NotAncestralError(GraphError):
    def __init__(self, verdict):
        self.verdict = verdict
        super().__init__(f"graph is not ancestral: {verdict.describe()}")


class NotDMAGError(GraphError):
    def __init__(self, verdict):
        self.verdict = verdict
        super().__init__(f"graph is not a DMAG: {verdict.describe()}")


class NotEquivalentError(GraphError):
    """Raised when an operation needs two Markov equivalent graphs.

    ``query`` is a distinguishing ``(a, b, Z)`` triple when one was found.
    """

    def __init__(self, message: str, query=None):
        self.query = query
        super().__init__(message)


class CapExceeded(RuntimeError):
    """Equivalence class enumeration hit its member cap.

    ``partial`` holds whatever was collected; it must not be used for
    invariance claims.
    """

    def __init__(self, cap: int, partial=None):
        self.cap = cap
        self.partial = partial
        super().__init__(f"equivalence class exceeds cap of {cap} members")

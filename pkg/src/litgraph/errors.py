"""Exception types shared across the package."""


class LitGraphError(Exception):
    """Base class for all litgraph errors."""


# --- graph store ---

class DuplicateName(LitGraphError):
    """Canonical name or synonym collides with an existing node."""


class CycleError(LitGraphError):
    """Edge insertion would make the hierarchy cyclic."""


class SelfLoopError(CycleError):
    """child == parent."""


class UnknownId(LitGraphError):
    """Referenced node or publication does not exist."""


class Unreachable(LitGraphError):
    """Node has no top-level ancestor."""


# --- ingestion / parsing ---

class ParseError(LitGraphError):
    """Malformed input; carries the offending line number when known."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


# --- classification ---

class UnknownFos(LitGraphError):
    """Label refers to a FoS id that is missing or has the wrong tier."""


class ModelNotTrained(LitGraphError):
    """Survey classifier used before training."""


# --- search ---

class EmptyQuery(LitGraphError):
    """Query is empty or normalizes to no tokens."""


class DimensionMismatch(LitGraphError):
    """Vector dimension differs from the index dimension."""


# --- provider / rag ---

class ProviderError(LitGraphError):
    """Completion or embedding provider failed."""


class MalformedReply(LitGraphError):
    """Provider reply violates the structured-output contract."""


class UngroundedCitation(LitGraphError):
    """Answer cites a marker outside the retrieved document range."""


class NoFullText(LitGraphError):
    """Publication has no full text attached."""


# --- evaluation ---

class EmptyTraces(LitGraphError):
    """Metric called with no traces."""


class ZeroIdeal(LitGraphError):
    """Navigation trace with ideal step count of zero."""

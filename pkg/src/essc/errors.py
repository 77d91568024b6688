"""Exception types shared across the package."""


class EsscError(Exception):
    """Base class for all errors raised by this package."""


class EdgeListParseError(EsscError, ValueError):
    """Malformed edge-list input; carries a 1-based line number."""

    def __init__(self, lineno: int, message: str):
        self.lineno = lineno
        super().__init__(f"line {lineno}: {message}")


class DegenerateGraphError(EsscError, ValueError):
    """The graph has no edges, so no reference model exists."""


class ParameterError(EsscError, ValueError):
    """A generator was called with infeasible parameters."""


class GenerationError(EsscError, RuntimeError):
    """Random wiring could not be completed within the retry budget."""

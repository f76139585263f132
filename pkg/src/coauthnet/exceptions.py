"""Exception types raised across the package."""


class CoauthnetError(Exception):
    """Base class for all package errors."""


class CorpusError(CoauthnetError, ValueError):
    """Malformed or inconsistent bibliographic input.

    ``line`` carries the 1-based line number in the source file when known.
    """

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class GraphError(CoauthnetError, ValueError):
    """Invalid graph construction or query (unknown node, bad partition)."""


class ConvergenceError(CoauthnetError, RuntimeError):
    """An iterative solver did not reach its tolerance."""

    def __init__(self, message, iterations):
        self.iterations = iterations
        super().__init__(f"{message} (after {iterations} iterations)")


class UnknownAuthorWarning(UserWarning):
    """Annotation rows referenced names absent from the corpus."""

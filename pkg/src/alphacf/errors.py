"""Exception hierarchy shared by the library and the CLI."""


class AlphaCFError(Exception):
    """Base class for all errors raised by alphacf."""


class ParseError(AlphaCFError, ValueError):
    """Malformed edge-list input."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class ParameterError(AlphaCFError, ValueError):
    """A parameter is outside its valid range."""


class ConvergenceError(AlphaCFError, RuntimeError):
    """An iterative solver stopped before reaching its tolerance."""

    def __init__(self, message, residual):
        self.residual = residual
        super().__init__(f"{message} (residual {residual:.3e})")


class BudgetError(AlphaCFError, RuntimeError):
    """The requested computation exceeds a configured size budget."""

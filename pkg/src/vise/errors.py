"""Exception types shared across the package."""


class DomainError(ValueError):
    """A parameter lies outside the domain where a quantity is defined."""


class UndefinedMetricError(ArithmeticError):
    """A metric was requested for a game that has no agent-steps."""


class ConfigError(ValueError):
    """Malformed or inconsistent configuration file."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)

class SumsetLabError(Exception):
    """Base class for package errors."""


class DomainError(SumsetLabError, ValueError):
    """A numeric argument lies outside the domain of the operation."""


class ConfigurationError(SumsetLabError, ValueError):
    """An unsupported option combination or malformed experiment config."""


class UnsupportedCombinationError(ConfigurationError):
    """No threshold result is known for the requested (h, g) pair."""

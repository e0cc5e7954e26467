"""Exception types raised by the library."""


class InvalidStateError(ValueError):
    """A matrix or ket fails the density-matrix / normalization checks."""


class DomainError(ValueError):
    """An argument lies outside the domain of a function."""


class UnsupportedSpecError(ValueError):
    """A chain specification is outside what a solver handles."""


class ConfigError(ValueError):
    """Invalid sweep configuration."""


class ConsistencyError(RuntimeError):
    """Two independent evaluations of the same quantity disagree."""

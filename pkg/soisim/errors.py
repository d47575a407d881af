"""Exception types for soisim.

Every error derives from ``SoisimError``. Precondition and configuration
failures are also ``ValueError`` so plain ``except ValueError`` callers keep
working; numerical failures are ``ArithmeticError``.
"""


class SoisimError(Exception):
    """Base class for all soisim errors."""


class DomainError(SoisimError, ValueError):
    """An argument lies outside the domain of the operation."""


class AlignmentError(SoisimError, ValueError):
    """Two grids disagree, or a timestamp is not on the simulation grid."""


class UnsupportedPolicyError(DomainError):
    """The sampling policy kind is not supported by the requested operation."""


class UnsupportedModelError(DomainError):
    """The process model kind is not supported by the requested operation."""


class ConfigError(SoisimError, ValueError):
    """A configuration file or experiment configuration is invalid."""


class NumericError(SoisimError, ArithmeticError):
    """A numerical routine failed to converge or produced inconsistent values."""


class InsufficientEpisodesError(NumericError):
    """Too few simulated exit episodes completed to form an estimate."""

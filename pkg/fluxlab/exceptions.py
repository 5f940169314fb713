"""
Exception hierarchy shared by solvers, reports and the command line.
"""


class FluxLabError(Exception):
    """Base class for every error raised by fluxlab."""


class DomainError(FluxLabError, ValueError):
    """Input outside the mathematical domain of an operation."""


class OutOfRangeError(DomainError):
    """Value outside a validity window.

    Attributes:
        bound: Which side of the window was violated, ``"lower"`` or ``"upper"``.
    """

    def __init__(self, message: str, bound: str):
        super().__init__(message)
        self.bound = bound


class ConfigurationError(FluxLabError, ValueError):
    """Physically inconsistent configuration, e.g. an incommensurate flux."""


class ContractError(FluxLabError):
    """Caller violated an operation contract (shapes, time step)."""


class UsageError(ConfigurationError):
    """Bad command line or configuration file."""

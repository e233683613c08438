"""Exception hierarchy shared by all bandscan modules.

Exit-code mapping used by the CLI: DomainError, MeshError and ConfigError
are usage/input problems (exit 2); NumericalError, ResolutionError and
TrackingError are solver-side failures (exit 3).
"""


class BandscanError(Exception):
    """Base class for all bandscan errors."""


class DomainError(BandscanError, ValueError):
    """Input violates a mathematical precondition (zero wave vector, ...)."""


class MeshError(BandscanError, ValueError):
    """Surface mesh fails validation (open, non-orientable, inverted)."""


class ConfigError(BandscanError, ValueError):
    """Scan configuration is malformed; message names the offending field."""


class NumericalError(BandscanError, RuntimeError):
    """A solver failed to converge or produced an untrustworthy result."""


class ResolutionError(NumericalError):
    """Discretization too coarse to resolve the inclusion."""


class TrackingError(NumericalError):
    """Band identification along the scan ray is ambiguous."""

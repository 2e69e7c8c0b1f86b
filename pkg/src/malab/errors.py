"""Exception types shared across the package."""


class MALabError(Exception):
    """Base class for package-specific errors."""


class ParameterError(MALabError, ValueError):
    """A structural parameter is outside its admissible range."""


class RegimeError(MALabError, ValueError):
    """Inputs fall outside the regime in which a construction is valid."""


class DomainMembershipError(MALabError, ValueError):
    """A point was expected to lie in (or on the boundary of) a domain."""


class DegenerateFrameError(MALabError, ValueError):
    """A local frame was requested for coincident anchor points."""


class DiscretizationError(MALabError, ValueError):
    """The requested grid cannot resolve the domain."""


class IterationLimitError(MALabError, RuntimeError):
    """An iterative solve failed to converge within its budget.

    Carries a ``diagnostics`` dict with the iteration history so callers
    can report what happened.
    """

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


class ShootingBracketError(MALabError, RuntimeError):
    """No sign change was found for the shooting parameter."""

    def __init__(self, message, tried_interval=None):
        super().__init__(message)
        self.tried_interval = tried_interval


class WindowError(MALabError, ValueError):
    """A fitting window contains too few usable samples."""


class UncertifiedBarrierError(MALabError, ValueError):
    """A comparison check was requested with an uncertified barrier."""

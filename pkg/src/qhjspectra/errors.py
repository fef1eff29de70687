"""Exception hierarchy shared by every module of the package."""


class QHJError(ValueError):
    """Base class for all errors raised by qhjspectra."""


class InvariantError(QHJError):
    """A constructor argument violates a documented invariant."""


class DomainError(QHJError):
    """An argument lies outside the domain of a closed-form expression."""


class NoClassicalRegionError(QHJError):
    """Turning points are complex or coincident."""


class WindowError(QHJError):
    """Start point lies outside the validity window of the Frobenius series."""


class PropagationError(QHJError):
    """Complex-plane integration failed (step underflow or non-finite values)."""


class NodeOnContourError(QHJError):
    """The propagated solution vanishes on the integration contour."""


class ConvergenceError(QHJError):
    """A refinement loop hit its cap without meeting the tolerance."""

    def __init__(self, message, estimate=None):
        super().__init__(message)
        self.estimate = estimate


class BracketError(QHJError):
    """The eigenvalue search could not bracket the requested state."""

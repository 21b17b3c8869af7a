"""Exception types raised across the package."""


class DomainError(ValueError):
    """Input outside the domain where a quantity is defined."""


class UnboundMotionError(DomainError):
    """No turning point exists at the requested energy."""


class PhotonSphereError(DomainError):
    """Closest approach at or inside a (true or predicted) photon sphere."""


class QuadratureError(ArithmeticError):
    """Node doubling hit its cap before two successive estimates agreed."""

    def __init__(self, message, previous=None, last=None):
        super().__init__(message)
        self.previous = previous
        self.last = last


class NoStationaryPointError(ArithmeticError):
    """The derivative of a PMS objective never changes sign on the bracket."""

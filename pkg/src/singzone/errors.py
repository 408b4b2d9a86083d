"""Exception types raised across the package."""


class SingzoneError(Exception):
    """Base class for package errors."""


class DomainError(SingzoneError, ValueError):
    """State lies outside the domain where the Euler-angle dynamics are defined."""


class OrderError(SingzoneError, ValueError):
    """Requested derivative order exceeds what the jet engine supports."""


class SingularMatrix(SingzoneError, ArithmeticError):
    """Decoupling matrix is singular, or numerically too close to it, to invert.

    Carries the determinant and condition estimate that triggered the
    rejection so callers can log them.
    """

    def __init__(self, message, det=float("nan"), cond=float("inf")):
        super().__init__(message)
        self.det = det
        self.cond = cond


class EmptyContour(SingzoneError):
    """Scanned field has no sign change, so the zero level set is empty."""


class GridMismatch(SingzoneError, ValueError):
    """Two grid scans do not share the same axes."""


class ConfigError(SingzoneError, ValueError):
    """Invalid scenario or command configuration."""

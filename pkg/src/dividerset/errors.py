"""Exception types raised by the geometry routines."""


class DividerError(Exception):
    """Base class for all errors raised by this package."""


class SingularParameterizationError(DividerError, ValueError):
    """The first derivative of the curve vanishes at the requested parameter."""


class ZeroCurvatureError(DividerError, ValueError):
    """The curvature is too small for the osculating centre to be finite."""


class NoConvergenceError(DividerError, RuntimeError):
    """An iterative solver exhausted its budget."""


class OutOfDomainError(DividerError, ValueError):
    """A root left the parameter domain of an open curve."""


class CertificationError(DividerError, ValueError):
    """A solution of the contact equations is a distance maximum, not a minimum."""


class EmptyForegroundError(DividerError, ValueError):
    """A bitmap has no foreground cells."""


class NoBoundaryError(DividerError, ValueError):
    """A bitmap foreground touches no background cell."""


class CurveSpecError(DividerError, ValueError):
    """A curve preset string or its parameters are invalid."""

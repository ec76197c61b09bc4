"""Exception types shared across the kernel."""


class SplinekitError(Exception):
    """Base class for all kernel errors."""


class DomainError(SplinekitError):
    """Parameter value lies outside the valid domain of a curve."""


class RegularityError(SplinekitError):
    """Degenerate geometry: vanishing velocity or a zero-length polygon leg."""


class CurvatureSingularityError(RegularityError):
    """Curvature too close to zero for a center-of-curvature computation."""


class NoExactFloatFormError(SplinekitError):
    """Clamped polygon has no exact unclamped-uniform representation."""

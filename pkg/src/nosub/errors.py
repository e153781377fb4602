"""Exception types shared across the package."""


class NosubError(Exception):
    """Base class for all package errors."""


class InvalidInputError(NosubError, ValueError):
    """Input violates a documented precondition."""


class UnsupportedInstanceError(NosubError):
    """Instance lies outside the regime an exact routine can handle."""


class UndefinedRatioError(InvalidInputError):
    """Aspect ratio requested for a set whose minimum pairwise distance is 0."""

"""Exception types raised across the package."""


class KkError(Exception):
    """Base class for all package errors."""


class InvalidParameterError(KkError, ValueError):
    pass


class LengthError(KkError, ValueError):
    pass


class OriginCrossingError(KkError, ValueError):
    """A complex trajectory touches the origin, so its winding number is undefined."""


class AliasingError(KkError, ValueError):
    pass


class DivergenceError(KkError, RuntimeError):
    """LMS training blew up (MSE grew past the divergence guard)."""


class DemodulationError(KkError, RuntimeError):
    pass

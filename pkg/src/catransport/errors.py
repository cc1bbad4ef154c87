"""Exception types raised across the package."""


class CatransportError(Exception):
    """Base class for all package errors."""


class DomainError(CatransportError, ValueError):
    """Input outside the domain of an operation (wrong model, bad shape, ...)."""


class UnsupportedOperationError(CatransportError, NotImplementedError):
    pass


class CompositionError(CatransportError, ValueError):
    """Endpoints of two composed objects do not match."""

    def __init__(self, message, distance=None):
        super().__init__(message)
        self.distance = distance


class GridError(CatransportError, ValueError):
    pass


class NotABacktrackError(CatransportError, ValueError):
    def __init__(self, message, violation=None):
        super().__init__(message)
        self.violation = violation


class FiberError(CatransportError, ValueError):
    """A point or path does not lie over the expected base data."""


class CentralityError(CatransportError, ValueError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class FreenessError(CatransportError, ValueError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class FixtureError(CatransportError, ValueError):
    pass


class UnknownNameError(CatransportError, KeyError):
    """Unknown scenario or check identifier."""

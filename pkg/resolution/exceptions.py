class ResolutionError(Exception):
    """Base class for errors raised by the resolution library."""


class DomainError(ResolutionError, ValueError):
    """An argument lies outside the domain of the operation."""


class DimensionMismatch(DomainError):
    """Sizes of beliefs, regions, vectors or matrices do not agree."""


class ConvergenceError(ResolutionError):
    """A numerical solver stopped without meeting its tolerance."""

    def __init__(self, message, best_value=None):
        super().__init__(message)
        self.best_value = best_value

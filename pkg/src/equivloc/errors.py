"""Exception hierarchy shared by all modules."""


class EquivlocError(Exception):
    """Base class for every error raised by this package."""


class StructuralError(EquivlocError, ValueError):
    """Objects that cannot be combined: mismatched variable lists, unknown ids, ..."""


class ValidationError(EquivlocError, ValueError):
    """Input data violates a model invariant.

    ``path`` locates the offending field inside the input document
    (for example ``fixed_points[3].weights[1]``) when known.
    """

    def __init__(self, message, path=None):
        self.path = path
        self.message = message
        if path:
            message = f"{path}: {message}"
        super().__init__(message)


class DomainError(EquivlocError, ValueError):
    """An operation was applied outside of its domain (zero denominator, ...)."""


class GenericityError(DomainError):
    """A circle direction pairs to zero with a weight, or ties across an edge."""


class CapabilityError(EquivlocError):
    """The model lacks the data an operation needs (e.g. no one-skeleton)."""

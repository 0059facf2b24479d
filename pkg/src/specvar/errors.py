"""Exception types shared across the package."""


class SpecvarError(Exception):
    """Base class for all package errors."""


class DomainError(SpecvarError, ValueError):
    """An argument is outside the mathematical domain of an operation."""


class ValidationError(SpecvarError, ValueError):
    """Structured input (measure JSON, CSV) failed validation.

    ``path`` points at the offending key, e.g. ``atoms[3].mass``.
    """

    def __init__(self, message, path=""):
        self.path = path
        super().__init__(f"{path}: {message}" if path else message)


class SerializationError(SpecvarError, ValueError):
    """The object cannot be serialized (e.g. opaque density evaluators)."""


class NumericError(SpecvarError, RuntimeError):
    """A numerical routine could not meet its tolerance.

    ``achieved`` carries the error estimate that was actually reached.
    """

    def __init__(self, message, achieved=None):
        self.achieved = achieved
        if achieved is not None:
            message = f"{message} (achieved tolerance {achieved:.3e})"
        super().__init__(message)

class HPKError(Exception):
    """Base class for library errors."""


class ArgumentError(HPKError, ValueError):
    pass


class ArityError(ArgumentError):
    pass


class StructuralError(HPKError):
    """An input violates a structural requirement (e.g. d^2 != 0)."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class PreconditionError(HPKError):
    pass


class NonTerminationError(HPKError):
    def __init__(self, message, weight=None):
        super().__init__(message)
        self.weight = weight


class StabilizationError(HPKError):
    def __init__(self, message, coefficient=None):
        super().__init__(message)
        self.coefficient = coefficient

"""Exception types shared across the package."""


class CoprimeLabError(Exception):
    """Base class for all package-specific errors."""


class ValidationError(CoprimeLabError):
    """Malformed input: bad permutation, degree mismatch, invalid parameters."""


class InstanceFormatError(ValidationError):
    """An instance file violates the schema; the message carries the location."""


class ContainmentError(CoprimeLabError):
    """An element or subgroup lies outside the expected ambient group."""


class PreconditionError(CoprimeLabError):
    """A documented precondition of an operation does not hold."""


class CapacityError(CoprimeLabError):
    """A computation would exceed the enumeration cap or a family ceiling."""


class GenerationError(CoprimeLabError):
    """An instance family cannot be realised for the requested parameters."""


class InternalCheckError(CoprimeLabError):
    """A condition that is mathematically guaranteed failed: signals a bug."""

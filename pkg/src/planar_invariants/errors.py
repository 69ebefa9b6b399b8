"""Exception types raised across the package."""


class InvariantError(Exception):
    """Base class for all errors raised by planar_invariants."""


class DomainError(InvariantError, ValueError):
    """An argument lies outside the domain where the quantity is defined."""


class ConvergenceError(InvariantError, ArithmeticError):
    """A truncated product could not be certified within its term budget."""


class ResolutionError(InvariantError, ValueError):
    """The sampling grid is too coarse to separate the punctures."""


class MultiComponentError(InvariantError, ValueError):
    """A topology query expected exactly one connected component."""


class PreconditionError(InvariantError, ValueError):
    """A search was started from a bracket that does not satisfy its precondition."""

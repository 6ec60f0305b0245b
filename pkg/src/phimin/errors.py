"""Exception types shared across the package."""


class PhiminError(Exception):
    """Base class for all package errors."""


class DomainError(PhiminError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class BoundsError(DomainError):
    """A limit, range, or table capacity was exceeded."""


class EvenModulusError(DomainError):
    """Raised for even moduli: only the class a = 1 (mod m) contains a
    totient when m is even (and only phi(1) = 1), so every computation
    here requires odd m."""


class ConsistencyError(PhiminError, RuntimeError):
    """An internal cross-check failed (two routes to the same quantity
    disagree).  Indicates an implementation bug, never bad user input."""

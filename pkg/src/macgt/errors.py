"""Exception types shared by all modules."""


class MacError(Exception):
    """Base class for library errors."""


class DomainError(MacError, ValueError):
    """An input lies outside the domain of an operation."""


class PoleError(DomainError, ZeroDivisionError):
    """A denominator vanishes at the requested point.

    The message always names the offending condition, e.g. ``pole: x = q^3``.
    """


class ConsistencyError(MacError, AssertionError):
    """An internal invariant failed. This signals a bug, not bad input."""

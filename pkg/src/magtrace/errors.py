"""Exception types shared across the package.

Every raised condition falls into one of four buckets so the command line
front end can map failures onto stable exit codes.
"""


class CalculusError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(CalculusError, ValueError):
    """A parameter lies outside the mathematical domain of the operation."""


class RangeError(CalculusError, ValueError):
    """A request exceeds what the stored truncation can faithfully represent."""


class ResourceError(CalculusError, RuntimeError):
    """A computation would exceed the configured numerical budget."""


class ComputationError(CalculusError, RuntimeError):
    """A numerical routine failed to produce a trustworthy result."""

"""Exception types shared across the package."""

from __future__ import annotations


class HorokitError(Exception):
    """Base class for all library errors."""


class InvalidSpaceError(HorokitError):
    """A distance oracle violated a metric axiom or returned a bad value."""


class InvalidPointError(HorokitError):
    """A point is malformed or outside the domain of its space."""


class InvalidParameterError(HorokitError):
    """A functional, map, or measure was given inconsistent parameters."""


class InvalidDistortionError(InvalidParameterError):
    """A distortion profile fails its defining conditions."""


class UnsupportedError(HorokitError):
    """The operation is not available for this kind of input."""


class PreconditionError(HorokitError):
    """The caller violated an operation precondition (e.g. ball too small)."""


class ResourceLimitError(HorokitError):
    """A configured size limit was exceeded.

    ``radius_reached`` records the last fully completed BFS layer when the
    limit was hit during ball construction.
    """

    def __init__(self, message: str, radius_reached: int | None = None):
        super().__init__(message)
        self.radius_reached = radius_reached


class NotMonotoneError(HorokitError):
    """An orbit distance sequence failed the required eventual monotonicity."""

    def __init__(self, message: str, witness_index: int | None = None):
        super().__init__(message)
        self.witness_index = witness_index


class BudgetError(HorokitError):
    """A limit evaluation did not stabilize within its iteration budget."""

"""Exception types shared across the package."""


class EquidistError(Exception):
    """Base class for all package-specific errors."""


class IntervalWidthError(EquidistError, ValueError):
    """Seed interval too narrow to contain an admissible rational."""


class PrecisionBudgetError(EquidistError, RuntimeError):
    """Requested fixed-point computation exceeds the precision cap."""


class StreamLengthError(EquidistError, ValueError):
    """Stream too short for the requested window layout."""


class CompletenessError(EquidistError, KeyError):
    """A lattice of Weyl series is missing a required multi-index."""

"""Exception hierarchy.

Everything raised on purpose by the package derives from
:class:`RealRootsError`, so callers (and the CLI) can catch one type.
Validation failures are also ``ValueError`` subclasses.
"""


class RealRootsError(Exception):
    """Base class for all package errors."""


class ValidationError(RealRootsError, ValueError):
    """Malformed input data."""


class DimensionMismatch(ValidationError):
    pass


class NotCentrallySymmetric(ValidationError):
    def __init__(self, point, message=None):
        self.point = tuple(point)
        super().__init__(message or f"support is not centrally symmetric: {self.point} has no negative")


class ConditionStarViolated(ValidationError):
    pass


class UnsupportedDimension(ValidationError):
    pass


class DegeneratePolytope(RealRootsError):
    pass


class NonPSDInput(ValidationError):
    pass


class ZeroBKK(RealRootsError):
    pass


class DegenerateSample(RealRootsError):
    """A sampled system has a non-transversal root; the caller should resample."""


class LeadingCoefficientZero(DegenerateSample):
    pass


class GridTooCoarse(RealRootsError):
    pass


class NewtonDivergence(RealRootsError):
    pass


class ExcessiveDegeneracy(RealRootsError):
    pass

"""Exception hierarchy.

Every error raised on purpose by the package derives from
:class:`SimplexWidthError`.  Precondition failures (bad geometry, empty
regions) derive from :class:`PreconditionError` so the CLI can map them onto
a single exit code.
"""


class SimplexWidthError(Exception):
    """Base class for all package errors."""


class InputError(SimplexWidthError, ValueError):
    """Malformed user input (files, schemas, flag values)."""


class PreconditionError(SimplexWidthError, ValueError):
    """An operation was called outside its domain."""


class ZeroVector(PreconditionError):
    pass


class DegenerateSimplex(PreconditionError):
    pass


class DegenerateFace(PreconditionError):
    pass


class SingularGenerators(PreconditionError):
    pass


class NotCovering(PreconditionError):
    """The closed hemispheres at the vertices do not cover the sphere."""


class EmptyRegion(PreconditionError):
    pass


class EmptyCell(PreconditionError):
    pass


class UndefinedCentroid(PreconditionError):
    """The resultant vector of a region is too close to zero to project."""


class NonPositiveWeight(PreconditionError):
    pass


class AntipodalPoints(PreconditionError):
    pass


class GridMismatch(PreconditionError):
    pass

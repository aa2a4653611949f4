"""Exception hierarchy shared by all modules."""


class PerfectFormsError(Exception):
    """Base class for every error raised by this package."""


class FormatError(PerfectFormsError):
    """Malformed text input (form files, T-space files, cone dumps)."""


class DimensionMismatch(PerfectFormsError, ValueError):
    pass


class NotSymmetric(PerfectFormsError, ValueError):
    pass


class NotPositiveDefinite(PerfectFormsError, ValueError):
    pass


class Singular(PerfectFormsError, ValueError):
    pass


class NonpositiveBound(PerfectFormsError, ValueError):
    pass


class NotPointed(PerfectFormsError):
    """The cone contains a line; extreme rays are undefined."""


class NoHRep(PerfectFormsError):
    pass


class BudgetExceeded(PerfectFormsError):
    """A configured resource cap was hit.

    ``partial`` carries whatever was computed before the cap (for example the
    automorphism generators found so far).
    """

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class ConeBudgetExceeded(BudgetExceeded):
    pass


class ClosureBudgetExceeded(BudgetExceeded):
    pass


class RayPSD(PerfectFormsError):
    """Neighbour search along a positive semidefinite direction."""


class NotInT(PerfectFormsError, ValueError):
    pass


class NoIndefiniteDirection(PerfectFormsError):
    def __init__(self, message, lineality=()):
        super().__init__(message)
        self.lineality = lineality


class OddDimension(PerfectFormsError, ValueError):
    pass


class DimensionNotMultipleOf4(PerfectFormsError, ValueError):
    pass


class EmptyPositivePart(PerfectFormsError):
    pass


class InternalError(PerfectFormsError):
    """An invariant that should always hold was violated."""

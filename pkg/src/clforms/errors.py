"""Exception hierarchy shared by all clforms modules."""


class ClformsError(Exception):
    """Base class for every error raised by this package."""


class NotPrimePower(ClformsError):
    """The requested field order is not a prime power."""


class Unsupported(ClformsError):
    """The requested field order exceeds the supported maximum."""


class ShapeMismatch(ClformsError):
    """Two matrices have incompatible shapes for the requested operation."""


class AmbientMismatch(ClformsError):
    """Two subspaces live in different ambient dimensions."""


class BadRank(ClformsError):
    """A requested matrix rank exceeds min(rows, cols)."""


class BadIndices(ClformsError):
    """Index arguments violate the documented ordering constraints."""


class BadParams(ClformsError):
    """Parameter combination outside a construction's precondition."""


class CapExceeded(ClformsError):
    """An enumeration or matrix would exceed the configured resource cap.

    The ``required`` attribute carries the size that would have been needed.
    """

    def __init__(self, message, required=None):
        super().__init__(message)
        self.required = required


class NonIntegerResult(ClformsError):
    """An exact division that must be integral was not."""


class OutOfScopeParams(ClformsError):
    """Parameters fall outside the validity range of a classification check."""


class PreconditionViolated(ClformsError):
    """A set operation's containment/disjointness precondition failed."""


class NotCL(ClformsError):
    """An operation requiring a verified membership verdict got a non-member."""


class NonIntegralSize(ClformsError):
    """A set size is not a multiple of q**((n-1)l); recorded on verdicts
    rather than raised during them."""


class LengthMismatch(ClformsError):
    """A vector's length does not match the indexed object set."""

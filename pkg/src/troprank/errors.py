"""Exception hierarchy shared across the package.

Everything raised intentionally derives from :class:`TropError`, so callers
(and the CLI) can distinguish domain errors from genuine bugs.
"""


class TropError(Exception):
    """Base class for all errors raised by this package."""


class FormatError(TropError):
    """A file or text payload does not parse as the expected format."""


class NotSquare(TropError):
    """Operation requires a square matrix."""


class SizeLimitExceeded(TropError):
    """Input exceeds a configured exhaustive-computation limit."""


class PreconditionViolated(TropError):
    """A documented operation precondition does not hold for the input."""


class LemmaViolation(TropError):
    """A guaranteed-to-succeed search failed; signals an implementation bug."""


class NoFiniteAssignment(TropError):
    """The assignment problem on the matrix has no finite-value solution."""


class DimensionMismatch(TropError):
    """Matrix dimensions are incompatible for the requested operation."""


class MalformedSymmetrized(TropError):
    """A matrix violates the symmetrized block-structure invariants."""


class LabelClash(TropError):
    """Row or column labels are not unique, or index sets overlap."""


class ShapeMismatch(TropError):
    """Two matrices that must share shape and labels do not."""


class FieldTooSmall(TropError):
    """The coefficient field has too few elements for the construction."""


class NotALifting(TropError):
    """A series matrix fails the entrywise degree conditions of a lifting."""


class NegativeRadicand(TropError):
    """A square root of a negative quantity was requested."""


class AttemptsExhausted(TropError):
    """Rejection sampling gave up after the configured number of attempts."""

    def __init__(self, message, stats=None):
        super().__init__(message)
        self.stats = stats or {}


class InvalidAlpha(TropError):
    """The separation parameter alpha is too small for the given n."""

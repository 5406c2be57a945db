"""Exception types shared across the package.

Everything derives from QuadmdtError so callers (and the CLI) can catch
validation problems uniformly.  BoundExceeded is separate in spirit: it
signals a refused computation, not bad input, and maps to its own exit code.
"""


class QuadmdtError(Exception):
    """Base class for all quadmdt errors."""


class DimMismatch(QuadmdtError):
    """dim, r and s are inconsistent (dim must equal 2r + s with r >= 1)."""


class PatternInvalid(QuadmdtError):
    """Splitting pattern is not 0-started, r-terminated and strictly increasing."""


class StepViolatesI1Bound(QuadmdtError):
    """Some step of the splitting pattern exceeds its 2-adic bound."""


class ConstraintViolated(QuadmdtError):
    """Strongly-excellent input data violates a gap condition."""


class NotNeighbourEligible(QuadmdtError):
    """Profile cannot be a Pfister neighbour (r + s > 2^n)."""


class ContextMismatch(QuadmdtError):
    """Cycle/correspondence contexts do not line up for the operation."""


class DegreeUnderflow(QuadmdtError):
    """Derivative operator would push a cycle below the diagonal grading."""


class InvalidLevel(QuadmdtError):
    """Splitting-tower level out of range."""


class OutOfWindow(QuadmdtError):
    """Lambda symbol index outside its lo/up window."""


class NotHeightOne(QuadmdtError):
    """Operation requires a nondefective height-1 profile."""


class ArityMismatch(QuadmdtError):
    """Partition does not match the expected symbol set."""


class BoundExceeded(QuadmdtError):
    """Enumeration refused: profile exceeds the configured size bound."""

"""Exception hierarchy.

Every error raised on purpose by this package derives from :class:`QuadmomError`,
so callers can catch one base class. The leaf classes mirror the failure modes of
the public operations (domain checks, shape checks, file parsing, ...).
"""


class QuadmomError(Exception):
    """Base class for all errors raised by quadmom."""


class DomainError(QuadmomError, ValueError):
    """A scalar argument is outside its mathematical domain (e.g. rho not in (0,1))."""


class DimensionError(QuadmomError, ValueError):
    """An array argument has an unsupported shape or size."""


class MismatchError(QuadmomError, ValueError):
    """Two arguments that must agree (dimensions, parameter sets) do not."""


class NonFiniteError(QuadmomError, ValueError):
    """A vector that must be finite contains NaN or infinity."""


class SpecError(QuadmomError, ValueError):
    """A spectrum specification is malformed or inconsistent."""


class DegenerateError(QuadmomError, ValueError):
    """The requested quantity is undefined for this problem (e.g. a zero Hessian)."""


class ParseError(QuadmomError, ValueError):
    """A matrix or vector file could not be parsed."""


class NotSymmetricError(QuadmomError, ValueError):
    """A loaded matrix is not symmetric to the required tolerance."""


class IndefiniteError(QuadmomError, ValueError):
    """A loaded matrix has a significantly negative eigenvalue."""


class IoError(QuadmomError, OSError):
    """A file could not be read or written."""

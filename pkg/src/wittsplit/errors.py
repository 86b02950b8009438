"""Exception types shared across the package."""


class WittsplitError(Exception):
    """Base class for all package errors."""


class CapExceeded(WittsplitError):
    """A configured size/degree/enumeration cap was exceeded."""


class NotFiniteDimensional(WittsplitError):
    """Quotient algebra has an infinite monomial staircase."""


class RingMismatch(WittsplitError):
    """Operands belong to different Witt rings."""


class TruncationOverflow(WittsplitError):
    """Verschiebung shift does not fit in the truncation length."""


class ReducednessRequired(WittsplitError):
    """Operation needs a reduced coefficient algebra."""


class CacheCorrupt(WittsplitError):
    """Structure-polynomial cache failed its checksum."""


class NotSmooth(WittsplitError):
    """Plane curve has a singular point over the algebraic closure."""


class BoundInconclusive(WittsplitError):
    """Pole bound too small to represent the data of a coboundary search."""


class WitnessInvalid(WittsplitError):
    """A claimed splitting witness failed re-validation."""


class FactorIsSplit(WittsplitError):
    """A tensor-factor expected to be non-F-split turned out to be split."""


class ComparisonFailed(WittsplitError):
    """Truncated box-product does not match the Witt ring of the tensor."""


class InvalidRank(WittsplitError):
    """p-rank outside the range allowed by the dimension."""


class Uncatalogued(WittsplitError):
    """Subject is not in the classification catalogue."""


class ParseError(WittsplitError):
    """Malformed corpus record or polynomial string."""

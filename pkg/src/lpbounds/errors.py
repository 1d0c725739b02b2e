"""Exception types shared across the package.

Everything derives from ValueError so callers that do not care about the
fine-grained failure mode can catch a single builtin type.
"""


class NotSquareError(ValueError):
    """Matrix is not square (or not two-dimensional)."""


class NotHermitianError(ValueError):
    """Matrix deviates from its conjugate transpose beyond tolerance."""


class NotPositiveError(ValueError):
    """Matrix has an eigenvalue below the allowed negativity window."""


class ValidationError(ValueError):
    """A state, effect or POVM failed construction-time validation."""


class DimMismatchError(ValueError):
    """Operands live on Hilbert spaces of different dimension."""


class EmptyInputError(ValueError):
    """An operand collection that must be nonempty is empty."""


class BadRankError(ValueError):
    """Requested density-matrix rank lies outside 1..dim."""


class BadDimensionError(ValueError):
    """Dimension argument outside the supported range."""


class NotUnitVectorError(ValueError):
    """Vector norm differs from 1 beyond tolerance."""


class NotRankOneError(ValueError):
    """Operator is not a rank-one projection."""


class NotOddPrimeError(ValueError):
    """Dimension is not an odd prime."""


class NullVectorError(ValueError):
    """An operator annihilates the probe vector where a nonzero image is required."""


class NullProjectionError(NullVectorError):
    """A projection annihilates the probe vector; drop that index first."""

    def __init__(self, index: int, message: str | None = None):
        self.index = index
        super().__init__(message or f"projection {index} annihilates the probe vector")

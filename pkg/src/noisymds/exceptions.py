"""Exception and warning types shared across the package."""


class NonConvergence(RuntimeError):
    """An iterative solver exhausted its budget without converging."""


class ShapeMismatch(ValueError):
    """Two array arguments have incompatible shapes."""


class InvalidKappa(ValueError):
    """A condition-number parameter is outside its admissible range."""


class RankDeficient(ValueError):
    """A configuration is numerically rank deficient."""


class DimensionTooLarge(ValueError):
    """Requested embedding dimension does not fit the input."""


class LengthMismatch(ValueError):
    """A codeword length is inconsistent with the ambient size."""


class BudgetExhausted(RuntimeError):
    """A randomized construction ran out of attempts."""


class ZeroRow(ValueError):
    """A configuration row has (numerically) zero norm."""


class NotCentered(ValueError):
    """A configuration expected to be centered has nonzero column sums."""


class InsufficientPoints(ValueError):
    """Too few distinct grid points for a rate fit."""


class DegenerateCrossWarning(UserWarning):
    """Procrustes cross matrix has a zero singular value; the minimizer is not unique."""


class NonAntipodalBaseWarning(UserWarning):
    """Single-row packing family built on a base without antipodal row structure."""


class RowRadiusBudgetWarning(UserWarning):
    """Randomized frame search stopped before meeting the row-radius target."""

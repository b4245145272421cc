"""Input validation helpers.

All numeric entry points funnel their array arguments through these checks,
mirroring the scikit-learn convention of validating once at the boundary and
working with plain float64 ndarrays internally.
"""

import numpy as np

from .exceptions import ShapeMismatch

# Relative tolerance used when deciding whether a matrix counts as symmetric
# or hollow.  Inputs are symmetrized from the upper triangle afterwards, so
# the triangle is authoritative.
SYMMETRY_RTOL = 1e-8


def check_array_2d(A, name="array"):
    """Coerce to a 2-d float64 ndarray with finite entries."""
    A = np.asarray(A, dtype=float)
    if A.ndim != 2:
        raise ValueError(f"{name} must be 2-dimensional, got ndim={A.ndim}")
    if A.size == 0:
        raise ValueError(f"{name} must be non-empty")
    if not np.all(np.isfinite(A)):
        raise ValueError(f"{name} contains non-finite entries")
    return A


def check_square(A, name="matrix"):
    A = check_array_2d(A, name)
    if A.shape[0] != A.shape[1]:
        raise ValueError(f"{name} must be square, got shape {A.shape}")
    return A


def check_symmetric(A, name="matrix", rtol=SYMMETRY_RTOL):
    """Validate symmetry and return the exactly-symmetric version of ``A``.

    Asymmetry beyond ``rtol`` (relative to the largest magnitude entry)
    raises; small floating-point asymmetry is repaired by mirroring the
    upper triangle.
    """
    A = check_square(A, name)
    scale = np.abs(A).max()
    if scale > 0 and np.abs(A - A.T).max() > rtol * scale:
        raise ValueError(f"{name} is not symmetric")
    upper = np.triu(A)
    return upper + np.triu(A, 1).T


def check_dissimilarity(D, name="dissimilarity matrix", require_nonnegative=False):
    """Validate a symmetric hollow matrix of (squared) dissimilarities.

    The diagonal must vanish up to rounding; it is forced to exactly zero on
    return.  Off-diagonal entries may be negative unless
    ``require_nonnegative`` is set (the additive noise models can produce
    negative observed dissimilarities and classical scaling accepts them).
    """
    D = check_symmetric(D, name)
    scale = max(np.abs(D).max(), 1.0)
    if np.abs(np.diag(D)).max() > SYMMETRY_RTOL * scale:
        raise ValueError(f"{name} must have a zero diagonal")
    if require_nonnegative and D.min() < -SYMMETRY_RTOL * scale:
        raise ValueError(f"{name} must be entrywise nonnegative")
    np.fill_diagonal(D, 0.0)
    return D


def check_same_shape(A, B, name_a="first argument", name_b="second argument"):
    if A.shape != B.shape:
        raise ShapeMismatch(
            f"{name_a} and {name_b} have different shapes: {A.shape} vs {B.shape}"
        )


def as_points(X, name="configuration"):
    """Extract an (n, p) float64 point matrix from an array or Configuration."""
    points = getattr(X, "points", X)
    return check_array_2d(points, name)

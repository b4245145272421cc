"""Optimal rigid alignment and reconstruction losses.

Given an estimated configuration and a reference one, find the rigid map
(orthogonal matrix plus translation, reflections allowed) minimizing the
Frobenius norm of the residual, and report three losses on that residual:
root-mean-square row norm, largest row norm, and mean row norm.

The rotation is Frobenius-optimal even when the max-row loss is reported;
searching for the max-row-optimal rotation is out of scope.
"""

import warnings
from dataclasses import dataclass

import numpy as np

from .exceptions import DegenerateCrossWarning
from .linalg import svd_small
from .validation import as_points, check_same_shape


@dataclass(eq=False)
class AlignmentResult:
    """Rigid map g(x) = rotation @ x + translation with residual losses.

    The losses are evaluated on ``estimated - g(reference)`` and always
    satisfy loss_avg <= loss_rmse <= loss_two_inf.
    """

    rotation: np.ndarray     # (p, p) orthogonal, acts on column vectors
    translation: np.ndarray  # (p,)
    loss_rmse: float
    loss_two_inf: float
    loss_avg: float

    def apply(self, X):
        """Apply the rigid map to the rows of a configuration."""
        return as_points(X) @ self.rotation.T + self.translation


def procrustes(A, B):
    """Orthogonal matrix Q minimizing ||A - B Q||_F.

    Solved from the SVD of B^T A = W1 S W2^T as Q = W1 W2^T; Q ranges over
    the full orthogonal group (reflections included).  If B^T A has a zero
    singular value the minimizer is not unique; the computed Q is still a
    minimizer and a :class:`DegenerateCrossWarning` is emitted.
    """
    A = as_points(A, "A")
    B = as_points(B, "B")
    check_same_shape(A, B, "A", "B")
    cross = B.T @ A
    dec = svd_small(cross)
    s = dec.singulars
    if s[0] == 0.0 or s[-1] <= 1e-13 * s[0]:
        warnings.warn("cross matrix B^T A is singular; the optimal rotation "
                      "is not unique", DegenerateCrossWarning, stacklevel=2)
    return dec.left @ dec.right.T


def optimal_rigid_alignment(estimated, reference):
    """Best rigid alignment of ``reference`` onto ``estimated`` with losses.

    Both configurations are centered, the Frobenius-optimal rotation is
    computed between the centered point sets, and the translation matches
    the means, so g(x) = Q (x - mean(reference)) + mean(estimated).

    Returns
    -------
    AlignmentResult
        loss_rmse is the exact minimum of the root-mean-square loss over all
        rigid maps; loss_two_inf and loss_avg are evaluated at the same
        (Frobenius-optimal) map.
    """
    A = as_points(estimated, "estimated")
    B = as_points(reference, "reference")
    check_same_shape(A, B, "estimated", "reference")
    mean_a = A.mean(axis=0)
    mean_b = B.mean(axis=0)
    Ac = A - mean_a
    Bc = B - mean_b
    Q = procrustes(Ac, Bc)  # row convention: minimizes ||Ac - Bc @ Q||_F
    rotation = Q.T
    translation = mean_a - rotation @ mean_b
    residual = Ac - Bc @ Q
    row_norms = np.linalg.norm(residual, axis=1)
    return AlignmentResult(
        rotation=rotation,
        translation=translation,
        loss_rmse=float(np.sqrt(np.mean(row_norms ** 2))),
        loss_two_inf=float(row_norms.max()),
        loss_avg=float(row_norms.mean()),
    )

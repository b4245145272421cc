"""Dense linear-algebra kernels.

Double centering, partial symmetric eigendecomposition, small SVD, and the
matrix norms used throughout: spectral (largest singular value), Frobenius,
and the two-to-infinity norm (largest row norm).
"""

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .exceptions import NonConvergence
from .validation import check_array_2d, check_symmetric

# Gap below which the p-th and (p+1)-th eigenvalues count as tied, relative
# to the spectral scale.
TIE_RTOL = 1e-12


@dataclass(eq=False)
class EigenPairs:
    """Top eigenvalues (descending) with orthonormal eigenvectors.

    ``tie_flag`` is set when the retained spectrum is not separated from the
    discarded one, in which case the eigenbasis of the trailing retained
    eigenvalue is not unique.
    """

    values: np.ndarray   # (p,), non-increasing
    vectors: np.ndarray  # (n, p), orthonormal columns
    tie_flag: bool = False


@dataclass(eq=False)
class SmallSVD:
    """Full SVD of a small square matrix: M = left @ diag(singulars) @ right.T."""

    left: np.ndarray
    singulars: np.ndarray
    right: np.ndarray


def double_center(D):
    """Apply the double-centering map D -> -1/2 * H D H with H = I - J/n.

    For a realizable squared-distance matrix this produces the Gram matrix
    of the centered configuration.  Rows and columns of the result sum to
    zero up to rounding; the returned matrix is exactly symmetric.
    """
    D = check_symmetric(D, "D")
    row_means = D.mean(axis=1)
    grand_mean = row_means.mean()
    B = -0.5 * (D - row_means[:, None] - row_means[None, :] + grand_mean)
    # mirror to remove the last bits of floating-point asymmetry
    return 0.5 * (B + B.T)


def _fix_signs(vectors):
    """Make each column's largest-magnitude entry positive (first on ties)."""
    idx = np.argmax(np.abs(vectors), axis=0)
    signs = np.sign(vectors[idx, np.arange(vectors.shape[1])])
    signs[signs == 0] = 1.0
    return vectors * signs


def top_p_eigen(S, p):
    """Return the ``p`` algebraically largest eigenpairs of a symmetric matrix.

    Parameters
    ----------
    S : (n, n) array
        Symmetric matrix.
    p : int
        Number of eigenpairs, 1 <= p <= n.

    Returns
    -------
    EigenPairs
        Values sorted non-increasing, orthonormal eigenvectors as columns.
        Eigenvector signs follow a fixed convention (largest-magnitude entry
        positive) so results are reproducible across runs.

    Raises
    ------
    NonConvergence
        If the underlying iterative eigensolver fails to converge.
    """
    S = check_symmetric(S, "S")
    n = S.shape[0]
    if not 1 <= p <= n:
        raise ValueError(f"p must satisfy 1 <= p <= n, got p={p}, n={n}")
    # request one extra pair (when available) to detect a tie at the cut
    k = min(p + 1, n)
    try:
        vals, vecs = scipy.linalg.eigh(S, subset_by_index=(n - k, n - 1))
    except (scipy.linalg.LinAlgError, np.linalg.LinAlgError) as exc:
        raise NonConvergence(f"symmetric eigensolver failed: {exc}") from exc
    vals = vals[::-1]
    vecs = vecs[:, ::-1]
    tie = False
    if k > p:
        scale = max(abs(vals[0]), abs(vals[p]), 1.0)
        tie = (vals[p - 1] - vals[p]) <= TIE_RTOL * scale
    return EigenPairs(values=vals[:p].copy(), vectors=_fix_signs(vecs[:, :p]).copy(),
                      tie_flag=tie)


def svd_small(M, max_dim=32):
    """Full SVD of a small (p x p, p <= 32) matrix used in alignment problems."""
    M = check_array_2d(M, "M")
    if max(M.shape) > max_dim:
        raise ValueError(f"svd_small is limited to {max_dim}x{max_dim} inputs, "
                         f"got {M.shape}")
    u, s, vh = np.linalg.svd(M)
    return SmallSVD(left=u, singulars=s, right=vh.T)


def spectral_norm(A, rel_tol=1e-9, max_iter=5000, restarts=3, strict=True):
    """Largest singular value of ``A`` via power iteration on A^T A.

    Uses a deterministic (seeded) start vector and restarts with a fresh
    deterministic vector whenever an iterate lands in the nullspace or the
    Rayleigh estimate stalls without meeting the tolerance.

    Parameters
    ----------
    A : 2-d array
    rel_tol : float
        Stop when two consecutive Rayleigh estimates agree to this relative
        tolerance.  The achieved accuracy on the singular value is
        gap-dependent; for well-separated spectra it is far below the
        tolerance.
    max_iter : int
        Iteration budget per restart.
    strict : bool
        If True, raise :class:`NonConvergence` when no restart converges.
        If False, return the best (largest) estimate found; the estimate is
        always a valid lower bound on the norm.
    """
    A = check_array_2d(A, "A")
    scale = np.abs(A).max()
    if scale == 0:
        return 0.0
    m = A.shape[1]
    best = 0.0
    for attempt in range(restarts):
        rng = np.random.default_rng(0x5EED + attempt)
        v = rng.standard_normal(m)
        v /= np.linalg.norm(v)
        s2_old = -np.inf
        hits = 0
        stalled = False
        for _ in range(max_iter):
            w = A @ v
            s2 = float(w @ w)
            best = max(best, s2)
            u = A.T @ w
            nu = np.linalg.norm(u)
            if nu == 0.0:
                stalled = True  # iterate fell into the nullspace of A^T A
                break
            v = u / nu
            if s2 > 0 and abs(s2 - s2_old) <= rel_tol * s2:
                hits += 1
                if hits >= 2:
                    return float(np.sqrt(s2))
            else:
                hits = 0
            s2_old = s2
        if not stalled:
            # budget ran out while still making progress; a fresh start
            # would not converge faster, so stop retrying
            break
    if strict:
        raise NonConvergence(
            f"power iteration did not converge within {max_iter} iterations")
    return float(np.sqrt(best))


def two_to_inf_norm(A):
    """Largest Euclidean row norm of ``A``."""
    A = check_array_2d(A, "A")
    return float(np.sqrt(np.einsum("ij,ij->i", A, A).max()))


def frobenius_norm(A):
    """Frobenius norm of ``A``."""
    A = check_array_2d(A, "A")
    return float(np.linalg.norm(A, "fro"))

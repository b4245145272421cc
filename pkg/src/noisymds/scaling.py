"""Classical scaling: spectral embedding of a (squared) dissimilarity matrix.

The algorithm double-centers the input, takes the top-p eigenpairs, and maps
points to eigenvectors scaled by square-rooted eigenvalues.  Negative
retained eigenvalues (possible under heavy noise) are clamped to zero and
counted rather than raised, so Monte-Carlo sweeps stay total.
"""

from dataclasses import dataclass

import numpy as np
from sklearn.base import BaseEstimator

from .exceptions import DimensionTooLarge
from .linalg import double_center, spectral_norm, top_p_eigen
from .validation import check_dissimilarity


@dataclass(eq=False)
class Embedding:
    """Result of classical scaling.

    ``points`` is U * sqrt(clamped eigenvalues); column j has squared norm
    equal to the j-th clamped eigenvalue and columns are mutually orthogonal.
    ``residual_spectrum_norm`` estimates the spectral norm of the part of the
    double-centered matrix left out of the embedding.
    """

    points: np.ndarray
    eigenvalues: np.ndarray
    clamped_count: int
    residual_spectrum_norm: float


def classical_scaling(D, p, compute_residual_norm=True):
    """Embed a squared-dissimilarity matrix into R^p.

    Parameters
    ----------
    D : (n, n) array
        Symmetric hollow matrix of (possibly noisy) squared dissimilarities.
        Entries may be negative; only the diagonal must vanish.
    p : int
        Embedding dimension, 1 <= p < n.
    compute_residual_norm : bool
        Estimate the spectral norm of the deflated double-centered matrix by
        one extra power iteration (an O(n^2) diagnostic).  Disable in tight
        loops that do not consume it.

    Returns
    -------
    Embedding
    """
    D = check_dissimilarity(D, "D")
    n = D.shape[0]
    if p < 1:
        raise ValueError(f"p must be >= 1, got {p}")
    if p >= n:
        raise DimensionTooLarge(f"embedding dimension p={p} must be < n={n}")
    B = double_center(D)
    eig = top_p_eigen(B, p)
    clamped = np.clip(eig.values, 0.0, None)
    clamped_count = int(np.sum(eig.values < 0))
    points = eig.vectors * np.sqrt(clamped)
    residual = np.nan
    if compute_residual_norm:
        deflated = B - (eig.vectors * eig.values) @ eig.vectors.T
        residual = spectral_norm(deflated, rel_tol=1e-9, max_iter=500, strict=False)
    return Embedding(points=points, eigenvalues=eig.values,
                     clamped_count=clamped_count, residual_spectrum_norm=residual)


class ClassicalScaling(BaseEstimator):
    """Classical multidimensional scaling on precomputed squared dissimilarities.

    Scikit-learn style estimator: ``fit`` consumes an (n, n) squared
    dissimilarity matrix and exposes the embedding and its spectral
    diagnostics as fitted attributes.  The embedding is transductive, so the
    canonical entry point is :meth:`fit_transform`.

    Parameters
    ----------
    n_components : int, default=2
        Embedding dimension.
    compute_residual_norm : bool, default=True
        Whether to estimate the spectral norm of the discarded spectrum.

    Attributes
    ----------
    embedding_ : (n, n_components) ndarray
    eigenvalues_ : (n_components,) ndarray
        Retained eigenvalues of the double-centered matrix (before clamping).
    clamped_count_ : int
        Number of negative retained eigenvalues clamped to zero.
    residual_spectrum_norm_ : float
    """

    def __init__(self, n_components=2, compute_residual_norm=True):
        self.n_components = n_components
        self.compute_residual_norm = compute_residual_norm

    def fit(self, X, y=None):
        emb = classical_scaling(X, self.n_components,
                                compute_residual_norm=self.compute_residual_norm)
        self.embedding_ = emb.points
        self.eigenvalues_ = emb.eigenvalues
        self.clamped_count_ = emb.clamped_count
        self.residual_spectrum_norm_ = emb.residual_spectrum_norm
        self.n_samples_ = emb.points.shape[0]
        return self

    def fit_transform(self, X, y=None):
        return self.fit(X).embedding_

"""Latent configurations and their Euclidean squared-distance matrices.

A configuration is an (n, p) matrix of points.  This module samples
configurations, rescales them to a target condition number, builds their
squared-distance matrices, and checks membership in the configuration class
parameterized by a singular-value band [1/kappa, kappa] (of HX/sqrt(n)) and
a centered row-radius bound.
"""

from dataclasses import dataclass, field

import numpy as np

from .exceptions import InvalidKappa, RankDeficient
from .linalg import top_p_eigen, two_to_inf_norm
from .validation import as_points, check_array_2d


@dataclass(eq=False)
class Configuration:
    """An (n, p) point matrix with sampling provenance."""

    points: np.ndarray
    seed: int | None = None
    generator: str = "unknown"

    def __post_init__(self):
        self.points = check_array_2d(self.points, "points")

    @property
    def n(self):
        return self.points.shape[0]

    @property
    def p(self):
        return self.points.shape[1]


@dataclass
class MembershipReport:
    """Measured class parameters of a configuration.

    ``s_max`` and ``s_min`` are the extreme singular values of HX/sqrt(n),
    ``row_radius`` is the largest centered row norm, and ``kappa_fit`` is the
    smallest kappa for which the singular-value band contains [s_min, s_max].
    """

    s_max: float
    s_min: float
    row_radius: float
    kappa_fit: float
    in_class: bool
    kappa: float = field(repr=False, default=np.nan)
    r_x: float = field(repr=False, default=np.nan)


def sample_unit_ball(n, p, seed):
    """Sample ``n`` points i.i.d. from the uniform distribution on the unit
    ball in R^p.  Deterministic given ``seed``.

    Uses the exact radial construction: a normalized Gaussian direction
    scaled by U^(1/p) with U uniform on (0, 1).
    """
    if n < 1 or p < 1:
        raise ValueError("n and p must be positive")
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((n, p))
    norms = np.linalg.norm(g, axis=1)
    norms[norms == 0] = 1.0
    radii = rng.random(n) ** (1.0 / p)
    points = g * (radii / norms)[:, None]
    return Configuration(points=points, seed=_as_seed_int(seed), generator="unit_ball")


def apply_condition_scaling(X, kappa):
    """Rescale columns by a diagonal with entries linearly spaced from
    1/kappa to kappa (a single entry equal to kappa when p == 1).

    With kappa == 1 the configuration is unchanged.
    """
    if kappa < 1:
        raise InvalidKappa(f"kappa must be >= 1, got {kappa}")
    points = as_points(X)
    p = points.shape[1]
    if p == 1:
        s = np.array([float(kappa)])
    else:
        s = np.linspace(1.0 / kappa, kappa, p)
    scaled = points * s
    return Configuration(points=scaled, seed=getattr(X, "seed", None),
                         generator=f"{getattr(X, 'generator', 'unknown')}|scaled")


def distance_matrix(X):
    """Squared Euclidean distance matrix of a configuration.

    Accumulates per-coordinate squared differences (no Gram expansion), so
    near-coincident points do not suffer cancellation.  The diagonal is
    exactly zero and the result exactly symmetric.
    """
    points = as_points(X)
    n, p = points.shape
    out = np.zeros((n, n))
    for k in range(p):
        d = points[:, k, None] - points[None, :, k]
        out += d * d
    np.fill_diagonal(out, 0.0)
    return out


def center(X):
    """Remove the column means (the map X -> HX)."""
    points = as_points(X)
    centered = points - points.mean(axis=0)
    return Configuration(points=centered, seed=getattr(X, "seed", None),
                         generator=f"{getattr(X, 'generator', 'unknown')}|centered")


def check_membership(X, kappa, r_x):
    """Measure class parameters of ``X`` for given (kappa, r_x).

    Singular values of HX/sqrt(n) are obtained from the p x p matrix
    (HX)^T (HX) / n via the symmetric eigensolver.

    Raises
    ------
    RankDeficient
        If the smallest singular value is numerically zero.
    """
    if kappa <= 1:
        raise InvalidKappa(f"kappa must be > 1, got {kappa}")
    if r_x <= 0:
        raise ValueError(f"r_x must be > 0, got {r_x}")
    points = as_points(X)
    n, p = points.shape
    centered = points - points.mean(axis=0)
    cov = centered.T @ centered / n
    eig = top_p_eigen(cov, p)
    vals = np.clip(eig.values, 0.0, None)
    s_max = float(np.sqrt(vals[0]))
    s_min = float(np.sqrt(vals[-1]))
    if s_min <= 1e-12:
        raise RankDeficient(
            f"configuration is numerically rank deficient (s_min={s_min:.3e})")
    row_radius = two_to_inf_norm(centered)
    kappa_fit = max(s_max, 1.0 / s_min)
    in_class = (1.0 / kappa <= s_min) and (s_max <= kappa) and (row_radius <= r_x)
    return MembershipReport(s_max=s_max, s_min=s_min, row_radius=row_radius,
                            kappa_fit=kappa_fit, in_class=in_class,
                            kappa=float(kappa), r_x=float(r_x))


def _as_seed_int(seed):
    try:
        return int(seed)
    except (TypeError, ValueError):
        return None

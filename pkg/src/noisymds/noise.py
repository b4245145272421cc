"""Noise models for observed dissimilarity matrices.

The observed matrix is D = Delta + E where the error is an entrywise
function of the clean dissimilarity and an i.i.d. random term:
e_ij = psi(delta_ij, xi_ij).  Six model variants are supported:

==========================  =================================
tag                         d_ij for i != j
==========================  =================================
additive                    delta + xi
multiplicative              delta * (1 + xi)
abs_additive                (sqrt(delta) + xi)^2
abs_multiplicative          delta * (1 + xi)^2
thresh_additive             max(0, delta + xi)
thresh_multiplicative       max(0, delta * (1 + xi))
==========================  =================================

All models keep the matrix symmetric and hollow.  The additive and absolute
models may produce negative observed dissimilarities; they are passed through
unmodified (downstream code never requires nonnegativity).
"""

import math
from dataclasses import dataclass

import numpy as np

from .validation import check_dissimilarity, check_same_shape, check_symmetric

FAMILIES = ("gaussian", "student_t", "rademacher")
MODELS = (
    "additive",
    "multiplicative",
    "abs_additive",
    "abs_multiplicative",
    "thresh_additive",
    "thresh_multiplicative",
)


@dataclass(frozen=True)
class XiDistribution:
    """Distribution of the i.i.d. random term xi = mean_shift + scale * T.

    ``T`` is a standard member of ``family``: N(0, 1), Student-t with
    ``dof`` degrees of freedom, or a Rademacher sign.
    """

    family: str
    dof: float | None = None
    scale: float = 1.0
    mean_shift: float = 0.0

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}; expected one of {FAMILIES}")
        if self.scale < 0:
            raise ValueError(f"scale must be >= 0, got {self.scale}")
        if self.family == "student_t":
            if self.dof is None or self.dof <= 0:
                raise ValueError("student_t requires dof > 0")

    def has_q_moments(self, k):
        """Whether E|xi|^k is finite."""
        return self.family != "student_t" or self.dof > k

    def moment_norm(self, k):
        """Upper bound on the L^k norm (E|xi|^k)^(1/k); inf when the moment
        does not exist."""
        if not self.has_q_moments(k):
            return math.inf
        return abs(self.mean_shift) + self.scale * _standard_moment_norm(self.family, self.dof, k)

    def sample(self, size, rng):
        draw = _standard_sample(self.family, self.dof, size, rng)
        return self.mean_shift + self.scale * draw


@dataclass(frozen=True)
class NoiseSpec:
    """A noise model tag together with the xi distribution."""

    model: str
    xi: XiDistribution

    def __post_init__(self):
        if self.model not in MODELS:
            raise ValueError(f"unknown noise model {self.model!r}; expected one of {MODELS}")

    def config_line(self):
        """Serialize in the ``key=value`` config format."""
        dof = self.xi.dof if self.xi.dof is not None else 0.0
        return (f"model={self.model} family={self.xi.family} dof={dof:g} "
                f"sigma={self.xi.scale:g} gamma={self.xi.mean_shift:g}")

    @classmethod
    def from_mapping(cls, items):
        """Build from a mapping with keys model/family/dof/sigma/gamma."""
        family = items.get("family", "gaussian")
        dof = float(items.get("dof", 0) or 0)
        xi = XiDistribution(
            family=family,
            dof=dof if family == "student_t" else None,
            scale=float(items.get("sigma", 1.0)),
            mean_shift=float(items.get("gamma", 0.0)),
        )
        return cls(model=items.get("model", "additive"), xi=xi)


def _standard_sample(family, dof, size, rng):
    if family == "gaussian":
        return rng.standard_normal(size)
    if family == "student_t":
        return rng.standard_t(dof, size)
    return rng.integers(0, 2, size) * 2.0 - 1.0


def _standard_moment_norm(family, dof, k):
    """(E|T|^k)^(1/k) for the standard member of the family."""
    if family == "rademacher":
        return 1.0
    if family == "gaussian":
        # E|Z|^k = 2^(k/2) Gamma((k+1)/2) / sqrt(pi)
        log_mk = 0.5 * k * math.log(2.0) + math.lgamma((k + 1) / 2.0) - 0.5 * math.log(math.pi)
        return math.exp(log_mk / k)
    # student_t, finite only for k < dof:
    # E|T|^k = dof^(k/2) Gamma((k+1)/2) Gamma((dof-k)/2) / (sqrt(pi) Gamma(dof/2))
    log_mk = (0.5 * k * math.log(dof) + math.lgamma((k + 1) / 2.0)
              + math.lgamma((dof - k) / 2.0) - 0.5 * math.log(math.pi)
              - math.lgamma(dof / 2.0))
    return math.exp(log_mk / k)


def sample_xi_matrix(dist, n, seed):
    """Sample a symmetric hollow matrix with i.i.d. upper-triangle entries.

    Entries above the diagonal are drawn i.i.d. from ``dist`` and mirrored;
    the diagonal is zero.  Deterministic given ``seed``.
    """
    if n < 1:
        raise ValueError("n must be positive")
    rng = np.random.default_rng(seed)
    iu = np.triu_indices(n, k=1)
    draws = dist.sample(iu[0].size, rng)
    xi = np.zeros((n, n))
    xi[iu] = draws
    xi[(iu[1], iu[0])] = draws
    return xi


def apply_noise_model(spec, delta, xi):
    """Produce the observed dissimilarity matrix D for one noise model.

    ``delta`` must be symmetric, hollow, and nonnegative (realizable-shaped);
    ``xi`` symmetric and hollow of the same size.  The diagonal of the result
    is forced to zero and symmetry is preserved entrywise.
    """
    delta = check_dissimilarity(delta, "delta", require_nonnegative=True)
    xi = check_symmetric(xi, "xi")
    check_same_shape(delta, xi, "delta", "xi")
    model = spec.model
    if model == "additive":
        d = delta + xi
    elif model == "multiplicative":
        d = delta * (1.0 + xi)
    elif model == "abs_additive":
        d = (np.sqrt(delta) + xi) ** 2
    elif model == "abs_multiplicative":
        d = delta * (1.0 + xi) ** 2
    elif model == "thresh_additive":
        d = np.maximum(0.0, delta + xi)
    elif model == "thresh_multiplicative":
        d = np.maximum(0.0, delta * (1.0 + xi))
    else:  # pragma: no cover - guarded by NoiseSpec
        raise ValueError(f"unknown noise model {model!r}")
    np.fill_diagonal(d, 0.0)
    return d


def conditional_moment_bound(spec, delta_max, k):
    """Closed-form upper bound on max_ij E[|e_ij|^k | delta_ij]^(1/k) over
    delta in [0, delta_max]; ``inf`` if the required xi moments do not exist.

    The thresholded models satisfy |e| <= |xi| (respectively delta * |xi|)
    pointwise, so they share the bounds of their unthresholded counterparts.
    The absolute models involve xi^2 and therefore need moments of order 2k.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    if delta_max < 0:
        raise ValueError("delta_max must be >= 0")
    xi = spec.xi
    model = spec.model
    if model in ("additive", "thresh_additive"):
        return xi.moment_norm(k)
    if model in ("multiplicative", "thresh_multiplicative"):
        return delta_max * xi.moment_norm(k)
    # absolute models: e = xi^2 + 2 sqrt(delta) xi, or delta (2 xi + xi^2)
    sq = xi.moment_norm(2 * k)
    if math.isinf(sq):
        return math.inf
    if model == "abs_additive":
        return sq ** 2 + 2.0 * math.sqrt(delta_max) * xi.moment_norm(k)
    return delta_max * (2.0 * xi.moment_norm(k) + sq ** 2)

"""Minimax lower-bound constructions as checkable numerical objects.

Materializes the two packing families behind the minimax rates: a Fano-style
family of sign-pattern perturbations (one member per binary codeword) and a
Le Cam family of single-row radial perturbations, together with the
Varshamov-Gilbert codebook search, the exact Gaussian KL identity on
dissimilarity matrices, the chi-square/total-variation bound for the mixture
test, and a numeric verifier for the inequalities the constructions satisfy.
"""

import warnings
from dataclasses import dataclass, field

import numpy as np

from .alignment import optimal_rigid_alignment
from .configuration import Configuration, distance_matrix
from .exceptions import (BudgetExhausted, LengthMismatch, NonAntipodalBaseWarning,
                         NotCentered, RowRadiusBudgetWarning, ZeroRow)
from .linalg import top_p_eigen, two_to_inf_norm
from .validation import as_points, check_same_shape, check_symmetric


@dataclass(eq=False)
class BinaryCode:
    """Binary codewords with a recorded pairwise separation.

    Distances use the halved L1 convention d_H(t, t') = ||t - t'||_1 / 2.
    The first word is always the all-zeros vector.
    """

    words: np.ndarray  # (M, m) of {0, 1}
    separation: float

    @property
    def m(self):
        return self.words.shape[1]

    def __len__(self):
        return self.words.shape[0]


@dataclass(eq=False)
class PackingFamily:
    """A base configuration with its packing perturbations."""

    base: np.ndarray
    members: list
    eta: float
    kind: str  # "fano" | "lecam"
    v: np.ndarray | None = None
    code: BinaryCode | None = None


def hamming_distance(a, b):
    """Halved-L1 Hamming distance between two codewords."""
    return 0.5 * float(np.abs(np.asarray(a, dtype=float) - np.asarray(b, dtype=float)).sum())


def omega_embed(tau, n):
    """Embed a binary word of length floor(n/2) as a balanced sign vector.

    Produces (tau, -tau) for even n and (tau, 0, -tau) for odd n, so the
    output always sums to zero and has equal counts of +1 and -1 entries.
    """
    tau = np.asarray(tau, dtype=float).ravel()
    m = n // 2
    if tau.size != m:
        raise LengthMismatch(f"codeword length {tau.size} != floor(n/2) = {m}")
    if n % 2 == 0:
        return np.concatenate([tau, -tau])
    return np.concatenate([tau, [0.0], -tau])


def varshamov_gilbert(m, min_sep, seed, target_size=None, max_attempts=None):
    """Greedy randomized codebook with pairwise separation >= ``min_sep``.

    Samples random words and keeps those at halved-L1 distance at least
    ``min_sep`` from every kept word, starting from the all-zeros word.
    Stops at 2^(m//8) words (or ``target_size``) or when the attempt budget
    runs out.  Deterministic per seed.

    Raises
    ------
    BudgetExhausted
        If no word besides the zero word can be placed, which signals that
        ``min_sep`` is too large for ``m``.
    """
    if m < 1:
        raise ValueError("m must be positive")
    if target_size is None:
        target_size = max(2, 2 ** (m // 8))
    if max_attempts is None:
        max_attempts = 1000 + 500 * target_size
    rng = np.random.default_rng(seed)
    words = [np.zeros(m, dtype=int)]
    for _ in range(max_attempts):
        if len(words) >= target_size:
            break
        cand = rng.integers(0, 2, m)
        if all(0.5 * np.abs(cand - w).sum() >= min_sep for w in words):
            words.append(cand)
    if len(words) < 2:
        raise BudgetExhausted(
            f"could not place any codeword at separation {min_sep} in m={m} bits")
    return BinaryCode(words=np.array(words, dtype=int), separation=float(min_sep))


def _check_centered(X, name="X"):
    col_sums = X.sum(axis=0)
    scale = max(np.linalg.norm(X), 1e-300)
    if np.linalg.norm(col_sums) > 1e-9 * scale:
        raise NotCentered(f"{name} must be centered (column sums ~ 0)")


def build_fano_family(X, eta, v, code):
    """Family of sign-pattern perturbations Y(t) = X + eta * omega(t) v^T.

    ``X`` must be centered and ``v`` a unit vector; every member is then
    centered as well because the sign embedding sums to zero.
    """
    X = as_points(X)
    v = np.asarray(v, dtype=float).ravel()
    if v.size != X.shape[1]:
        raise LengthMismatch(f"v has length {v.size}, expected p={X.shape[1]}")
    if abs(np.linalg.norm(v) - 1.0) > 1e-12:
        raise ValueError("v must be a unit vector")
    _check_centered(X)
    n = X.shape[0]
    members = [X + eta * np.outer(omega_embed(tau, n), v) for tau in code.words]
    return PackingFamily(base=X, members=members, eta=float(eta), kind="fano",
                         v=v, code=code)


def build_lecam_family(X, eta):
    """Family of single-row radial perturbations X^k = X + eta e_k (X_k/||X_k||)^T.

    ``X`` must be centered with no zero rows.  The separation guarantee of
    the construction relies on antipodal row structure (X_k = -X_{k+n/2});
    a warning is emitted when that structure is absent.
    """
    X = as_points(X)
    _check_centered(X)
    n = X.shape[0]
    row_norms = np.linalg.norm(X, axis=1)
    if row_norms.min() <= 1e-12:
        raise ZeroRow("base configuration has a zero row; the radial direction "
                      "is undefined")
    scale = row_norms.max()
    antipodal = (n % 2 == 0)
    if antipodal:
        m = n // 2
        antipodal = bool(np.abs(X[:m] + X[m:]).max() <= 1e-9 * scale)
    if not antipodal:
        warnings.warn("base configuration is not antipodal; the separation "
                      "guarantee of the construction may not hold",
                      NonAntipodalBaseWarning, stacklevel=2)
    members = []
    for k in range(n):
        Y = X.copy()
        Y[k] += eta * X[k] / row_norms[k]
        members.append(Y)
    return PackingFamily(base=X, members=members, eta=float(eta), kind="lecam")


def make_packing_base(n, p, kappa, r_x, seed, max_tries=64):
    """Canonical centered base X = gamma * sqrt(n) * U for the packing demos.

    ``gamma`` is the harmonic mean of 1/kappa and kappa, and U is an
    orthonormal frame orthogonal to the all-ones vector with antipodal row
    structure, redrawn until its largest row norm is at most
    r_x / (2 sqrt(n)) or the retry budget is exhausted (best draw kept).

    Even n gives the antipodal structure required by the Le Cam family; odd
    n inserts a zero middle row, matching the odd branch of the sign
    embedding (such bases work for the Fano family only).
    """
    if n < 2 * p:
        raise ValueError(f"need n >= 2p, got n={n}, p={p}")
    gamma = 2.0 * kappa / (kappa ** 2 + 1.0)
    target = r_x / (2.0 * np.sqrt(n))
    rng = np.random.default_rng(seed)
    m = n // 2
    best_u, best_radius = None, np.inf
    for _ in range(max_tries):
        g = rng.standard_normal((m, p))
        q, r = np.linalg.qr(g)
        q = q * np.sign(np.diag(r))  # deterministic orientation
        if n % 2 == 0:
            u = np.vstack([q, -q]) / np.sqrt(2.0)
        else:
            u = np.vstack([q, np.zeros((1, p)), -q]) / np.sqrt(2.0)
        radius = two_to_inf_norm(u)
        if radius < best_radius:
            best_u, best_radius = u, radius
        if radius <= target:
            break
    else:
        warnings.warn(f"row-radius target {target:.3e} not met after {max_tries} "
                      f"draws (best {best_radius:.3e})", RowRadiusBudgetWarning,
                      stacklevel=2)
    points = gamma * np.sqrt(n) * best_u
    return Configuration(points=points, seed=None,
                         generator=f"packing_base(kappa={kappa:g}, r_x={r_x:g})")


def kl_gaussian_dissimilarity(delta_a, delta_b, sigma):
    """KL divergence between the laws of two noisy dissimilarity matrices
    under i.i.d. additive Gaussian noise of scale ``sigma``.

    Exact identity: the divergence equals the sum over unordered pairs of
    univariate Gaussian divergences, i.e. ||Delta_A - Delta_B||_F^2 / (4 sigma^2).
    """
    if sigma <= 0:
        raise ValueError("sigma must be positive")
    A = check_symmetric(delta_a, "delta_a")
    B = check_symmetric(delta_b, "delta_b")
    check_same_shape(A, B, "delta_a", "delta_b")
    diff = A - B
    return float((diff * diff).sum() / (4.0 * sigma ** 2))


def _lecam_row_diffs(family):
    """Per-member dissimilarity difference rows for single-row perturbations.

    Member k of a Le Cam family changes only row/column k of the distance
    matrix; returns the perturbed index and difference row for each member.
    """
    X = family.base
    diffs = []
    for i, member in enumerate(family.members):
        changed = np.flatnonzero(np.abs(member - X).max(axis=1) > 0)
        if changed.size > 1:
            raise ValueError("member does not perturb exactly one row")
        # eta == 0 leaves the base untouched; fall back to the member index
        k = int(changed[0]) if changed.size == 1 else i
        d_new = ((member[k] - X) ** 2).sum(axis=1)
        d_old = ((X[k] - X) ** 2).sum(axis=1)
        row = d_new - d_old
        row[k] = 0.0
        diffs.append((k, row))
    return diffs


def tv_chi2_bound(family, sigma):
    """Chi-square upper bound on the total variation distance between the
    base law and the uniform mixture over the family, for additive Gaussian
    noise of scale ``sigma``.

    Returns the raw value sqrt(exp(max_k F_k / sigma^2 - log n)
    + exp(max_{k != l} C_kl / sigma^2) - 1) where F_k is the squared
    Frobenius growth of member k and C_kl the Frobenius cross term; the raw
    value may exceed 1 when the bound is vacuous (clamp in reports).
    """
    if family.kind != "lecam":
        raise ValueError("tv_chi2_bound applies to single-row (lecam) families")
    if sigma <= 0:
        raise ValueError("sigma must be positive")
    n = family.base.shape[0]
    diffs = _lecam_row_diffs(family)
    frob_sq = np.array([2.0 * (row @ row) for _, row in diffs])
    rows = {k: row for k, row in diffs}
    max_cross = 0.0
    keys = sorted(rows)
    for i, k in enumerate(keys):
        for l in keys[i + 1:]:
            max_cross = max(max_cross, 2.0 * rows[k][l] * rows[l][k])
    with np.errstate(over="ignore"):
        term1 = np.exp(frob_sq.max() / sigma ** 2 - np.log(n))
        term2 = np.exp(max_cross / sigma ** 2)
        return float(np.sqrt(term1 + term2 - 1.0))


@dataclass
class PackingCheck:
    """One verified inequality: measured value vs. its bound."""

    kind: str
    check: str
    member: str
    measured: float
    bound: float
    passed: bool


@dataclass
class PackingReport:
    kind: str
    eta: float
    gamma_lo: float
    gamma_hi: float
    checks: list = field(default_factory=list)
    constants: dict = field(default_factory=dict)

    @property
    def all_passed(self):
        return all(c.passed for c in self.checks)

    def failures(self):
        return [c for c in self.checks if not c.passed]


def _singular_band(points):
    points = points - points.mean(axis=0)
    n, p = points.shape
    cov = points.T @ points / n
    vals = np.clip(top_p_eigen(cov, p).values, 0.0, None)
    return float(np.sqrt(vals[-1])), float(np.sqrt(vals[0]))


# numerical slack for the exact-direction inequalities
_TOL = 1e-9


def verify_packing_properties(family, kappa, r_x):
    """Numerically check the inequalities the packing construction satisfies.

    For sign-pattern (fano) families: the singular-value sandwich of every
    member, the Frobenius growth of the member dissimilarities (fitted
    constant against n^2 (gamma^2 eta^2 + eta^4), provable constant 32), the
    pairwise RMSE separation against gamma*eta/(gamma+eta) * sqrt(d_H/n),
    and the measured ratio ||omega - omega'||^2 / d_H.

    For single-row (lecam) families: per-member row radius, singular
    sandwich with eta/sqrt(n), max-row separation >= eta/2, Frobenius growth
    (fitted against n (eta^4 + eta^2 (gamma + r_x)^2), provable constant 16),
    and the pairwise Frobenius cross term (fitted against
    eta^4 + eta^2 r_x^2, provable constant 64).

    Fitted constants are reported because the source inequalities hold up to
    unspecified absolute constants; pass/fail uses the constants that the
    explicit derivations give.
    """
    base = family.base
    eta = family.eta
    n = base.shape[0]
    g_lo, g_hi = _singular_band(base)
    report = PackingReport(kind=family.kind, eta=eta, gamma_lo=g_lo, gamma_hi=g_hi)
    if family.kind == "fano":
        _verify_fano(family, report)
    elif family.kind == "lecam":
        _verify_lecam(family, report, r_x)
    else:
        raise ValueError(f"unknown family kind {family.kind!r}")
    return report


def _verify_fano(family, report):
    base, eta, code = family.base, family.eta, family.code
    n = base.shape[0]
    g_lo, g_hi = report.gamma_lo, report.gamma_hi
    gamma = g_hi
    delta_base = distance_matrix(base)
    growth_ref = n ** 2 * (gamma ** 2 * eta ** 2 + eta ** 4)
    max_growth_const = 0.0
    for i, member in enumerate(family.members):
        s_lo, s_hi = _singular_band(member)
        report.checks.append(PackingCheck(
            "fano", "singular_lower", str(i), s_lo, g_lo - eta,
            s_lo >= g_lo - eta - _TOL))
        report.checks.append(PackingCheck(
            "fano", "singular_upper", str(i), s_hi, g_hi + eta,
            s_hi <= g_hi + eta + _TOL))
        growth = np.sum((distance_matrix(member) - delta_base) ** 2)
        const = growth / growth_ref if growth_ref > 0 else 0.0
        max_growth_const = max(max_growth_const, const)
        report.checks.append(PackingCheck(
            "fano", "frobenius_growth", str(i), growth, 32.0 * growth_ref,
            growth <= 32.0 * growth_ref + _TOL))
    sep_ref_scale = gamma * eta / (gamma + eta) if eta > 0 else 0.0
    min_sep_const = np.inf
    for i in range(len(family.members)):
        for j in range(i + 1, len(family.members)):
            d_h = hamming_distance(code.words[i], code.words[j])
            if d_h == 0:
                continue
            rmse = optimal_rigid_alignment(family.members[i], family.members[j]).loss_rmse
            ref = sep_ref_scale * np.sqrt(d_h / n)
            const = rmse / ref if ref > 0 else np.inf
            min_sep_const = min(min_sep_const, const)
            report.checks.append(PackingCheck(
                "fano", "rmse_separation", f"{i}~{j}", rmse, ref,
                eta == 0 or rmse >= ref * (1.0 - 1e-9)))
            zeta = omega_embed(code.words[i], n) - omega_embed(code.words[j], n)
            ratio = float(zeta @ zeta) / d_h
            report.checks.append(PackingCheck(
                "fano", "dh_zeta_ratio", f"{i}~{j}", ratio, np.nan, True))
    report.constants["frobenius_growth"] = max_growth_const
    report.constants["rmse_separation"] = min_sep_const


def _verify_lecam(family, report, r_x):
    base, eta = family.base, family.eta
    n = base.shape[0]
    g_lo, g_hi = report.gamma_lo, report.gamma_hi
    gamma = g_hi
    base_radius = two_to_inf_norm(base - base.mean(axis=0))
    growth_ref = n * (eta ** 4 + eta ** 2 * (gamma + r_x) ** 2)
    sqrt_n = np.sqrt(n)
    diffs = _lecam_row_diffs(family)
    max_growth_const = 0.0
    for i, member in enumerate(family.members):
        radius = two_to_inf_norm(member - member.mean(axis=0))
        report.checks.append(PackingCheck(
            "lecam", "row_radius", str(i), radius, eta + base_radius,
            radius <= eta + base_radius + _TOL))
        s_lo, s_hi = _singular_band(member)
        report.checks.append(PackingCheck(
            "lecam", "singular_lower", str(i), s_lo, g_lo - eta / sqrt_n,
            s_lo >= g_lo - eta / sqrt_n - _TOL))
        report.checks.append(PackingCheck(
            "lecam", "singular_upper", str(i), s_hi, g_hi + eta / sqrt_n,
            s_hi <= g_hi + eta / sqrt_n + _TOL))
        sep = optimal_rigid_alignment(member, base).loss_two_inf
        report.checks.append(PackingCheck(
            "lecam", "two_inf_separation", str(i), sep, eta / 2.0,
            sep >= eta / 2.0 - _TOL))
        _, row = diffs[i]
        growth = 2.0 * float(row @ row)
        const = growth / growth_ref if growth_ref > 0 else 0.0
        max_growth_const = max(max_growth_const, const)
        report.checks.append(PackingCheck(
            "lecam", "frobenius_growth", str(i), growth, 16.0 * growth_ref,
            growth <= 16.0 * growth_ref + _TOL))
    cross_ref = eta ** 4 + eta ** 2 * r_x ** 2
    rows = {k: row for k, row in diffs}
    max_cross, arg = 0.0, "none"
    keys = sorted(rows)
    for a, k in enumerate(keys):
        for l in keys[a + 1:]:
            cross = 2.0 * rows[k][l] * rows[l][k]
            if cross > max_cross:
                max_cross, arg = cross, f"{k}~{l}"
    report.checks.append(PackingCheck(
        "lecam", "cross_term", arg, max_cross, 64.0 * cross_ref,
        max_cross <= 64.0 * cross_ref + _TOL))
    report.constants["frobenius_growth"] = max_growth_const
    report.constants["cross_term"] = (max_cross / cross_ref if cross_ref > 0 else 0.0)

"""Classical multidimensional scaling under noisy dissimilarities.

Core pieces: dense kernels (double centering, partial eigendecomposition,
matrix norms), configuration sampling and distance matrices, six noise
models, the classical-scaling embedding (functional and as a scikit-learn
style estimator), optimal rigid alignment with reconstruction losses,
minimax packing constructions, and a Monte-Carlo experiment harness.
"""

from .alignment import AlignmentResult, optimal_rigid_alignment, procrustes
from .configuration import (Configuration, MembershipReport, apply_condition_scaling,
                            center, check_membership, distance_matrix,
                            sample_unit_ball)
from .exceptions import (BudgetExhausted, DegenerateCrossWarning, DimensionTooLarge,
                         InsufficientPoints, InvalidKappa, LengthMismatch,
                         NonConvergence, NotCentered, RankDeficient, ShapeMismatch,
                         ZeroRow)
from .harness import (ExperimentPlan, RateFit, TrialRecord, default_plan,
                      emit_csv, fit_loglog_slope, parse_csv, run_experiment,
                      run_trial)
from .linalg import (EigenPairs, SmallSVD, double_center, frobenius_norm,
                     spectral_norm, svd_small, top_p_eigen, two_to_inf_norm)
from .lowerbound import (BinaryCode, PackingFamily, build_fano_family,
                         build_lecam_family, hamming_distance,
                         kl_gaussian_dissimilarity, make_packing_base, omega_embed,
                         tv_chi2_bound, varshamov_gilbert,
                         verify_packing_properties)
from .noise import (MODELS, NoiseSpec, XiDistribution, apply_noise_model,
                    conditional_moment_bound, sample_xi_matrix)
from .scaling import ClassicalScaling, Embedding, classical_scaling

__version__ = "0.1.0"

__all__ = [
    "AlignmentResult", "BinaryCode", "BudgetExhausted", "ClassicalScaling",
    "Configuration", "DegenerateCrossWarning", "DimensionTooLarge", "EigenPairs",
    "Embedding", "ExperimentPlan", "InsufficientPoints", "InvalidKappa",
    "LengthMismatch", "MODELS", "MembershipReport", "NoiseSpec", "NonConvergence",
    "NotCentered", "PackingFamily", "RankDeficient", "RateFit", "ShapeMismatch",
    "SmallSVD", "TrialRecord", "XiDistribution", "ZeroRow",
    "apply_condition_scaling", "apply_noise_model", "build_fano_family",
    "build_lecam_family", "center", "check_membership", "classical_scaling",
    "conditional_moment_bound", "default_plan", "distance_matrix",
    "double_center", "emit_csv", "fit_loglog_slope", "frobenius_norm",
    "hamming_distance", "kl_gaussian_dissimilarity", "make_packing_base",
    "omega_embed", "optimal_rigid_alignment", "parse_csv", "procrustes",
    "run_experiment", "run_trial", "sample_unit_ball", "sample_xi_matrix",
    "spectral_norm", "svd_small", "top_p_eigen", "tv_chi2_bound",
    "two_to_inf_norm", "varshamov_gilbert", "verify_packing_properties",
]

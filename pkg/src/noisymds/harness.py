"""Experiment orchestration: grid sweeps, rate fits, and CSV records.

A sweep runs the full pipeline per grid cell -- sample a configuration on
the unit ball, optionally rescale its condition number, build the squared
distance matrix, corrupt it with a noise model, embed with classical
scaling, and align against the generating configuration -- and records the
three reconstruction losses plus the operator-norm deviation of the
double-centered matrices.

Every cell derives its own random seed from the master seed and the cell's
grid coordinates, so results are byte-identical regardless of worker count
or execution order.
"""

import math
import time
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from joblib import Parallel, delayed

from .alignment import optimal_rigid_alignment
from .configuration import apply_condition_scaling, distance_matrix, sample_unit_ball
from .exceptions import InsufficientPoints, NonConvergence
from .linalg import double_center, spectral_norm
from .noise import MODELS, NoiseSpec, XiDistribution, apply_noise_model, sample_xi_matrix
from .scaling import classical_scaling

EXPERIMENTS = ("exp1", "exp2", "concentration", "custom")

CSV_HEADER = ("experiment,n,p,kappa,sigma,q,model,trial,status,"
              "loss_rmse,loss_two_inf,loss_avg,opnorm_dev,clamped_count,wall_ms")

# domain-separation tags for seed derivation
_CFG_TAG = 101
_XI_TAG = 202


@dataclass(frozen=True)
class ExperimentPlan:
    """Grid specification for a sweep.

    ``timing`` keeps wall-clock measurement off by default so the emitted
    CSV is a pure function of (plan, master_seed); turning it on records
    real per-trial times at the cost of byte-stable output.
    """

    experiment: str = "custom"
    n_grid: tuple = (128, 256, 512, 1024, 2048, 4096)
    p: int = 3
    trials: int = 10
    kappa_grid: tuple = (1.0,)
    sigma_grid: tuple = (0.25,)
    q_grid: tuple = (7.0,)
    noise_models: tuple = ("additive",)
    family: str = "student_t"
    gamma: float = 0.0
    master_seed: int = 0
    parallelism: int = 1
    fixed_config: bool = False
    timing: bool = False

    def validate(self):
        if self.experiment not in EXPERIMENTS:
            raise ValueError(f"unknown experiment {self.experiment!r}")
        if len(self.n_grid) == 0 or any(n2 <= n1 for n1, n2 in zip(self.n_grid, self.n_grid[1:])):
            raise ValueError("n_grid must be non-empty and strictly increasing")
        if any(n <= self.p for n in self.n_grid):
            raise ValueError("every n in n_grid must exceed p")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.p < 1:
            raise ValueError("p must be >= 1")
        if any(k < 1 for k in self.kappa_grid):
            raise ValueError("kappa values must be >= 1")
        if any(s < 0 for s in self.sigma_grid):
            raise ValueError("sigma values must be >= 0")
        if any(m not in MODELS for m in self.noise_models):
            raise ValueError(f"noise models must be among {MODELS}")
        if self.family == "student_t" and any(q is None or q <= 0 for q in self.q_grid):
            raise ValueError("student_t requires positive q values")
        if self.parallelism < 1:
            raise ValueError("parallelism must be >= 1")
        return self

    def cells(self):
        for n_i, n in enumerate(self.n_grid):
            for kappa_i, kappa in enumerate(self.kappa_grid):
                for sigma_i, sigma in enumerate(self.sigma_grid):
                    for q_i, q in enumerate(self.q_grid):
                        for model_i, model in enumerate(self.noise_models):
                            for trial in range(self.trials):
                                yield Cell(n_i, int(n), kappa_i, float(kappa),
                                           sigma_i, float(sigma), q_i, q,
                                           model_i, model, trial)


class Cell(NamedTuple):
    n_i: int
    n: int
    kappa_i: int
    kappa: float
    sigma_i: int
    sigma: float
    q_i: int
    q: object  # float dof, or None for gaussian noise
    model_i: int
    model: str
    trial: int


@dataclass
class TrialRecord:
    experiment: str
    n: int
    p: int
    kappa: float
    sigma: float
    q: object
    model: str
    trial: int
    status: str
    loss_rmse: float
    loss_two_inf: float
    loss_avg: float
    opnorm_dev: float
    clamped_count: int
    wall_ms: float


@dataclass
class RateFit:
    """Log-log rate fit on per-n medians with 10-90% bands.

    For the max-row loss, ``comp_ratio`` holds the per-n ratio of the median
    loss to sigma * sqrt(log(n)/n) (the compensated rate).
    """

    slope: float
    intercept: float
    r_squared: float
    n_values: np.ndarray
    medians: np.ndarray
    band_lo: np.ndarray
    band_hi: np.ndarray
    comp_ratio: np.ndarray | None = None


def default_plan(experiment, **overrides):
    """Plan presets for the three named experiments.

    exp1 sweeps condition number, noise level, and t-dof under additive
    noise; exp2 sweeps all six noise models; concentration measures the
    operator-norm deviation under additive Gaussian noise.
    """
    presets = {
        "exp1": dict(kappa_grid=(1.0, 1.25, 1.5, 1.75, 2.0),
                     sigma_grid=(0.1, 0.25, 0.5),
                     q_grid=(3.0, 5.0, 7.0),
                     noise_models=("additive",),
                     family="student_t"),
        "exp2": dict(kappa_grid=(1.0,),
                     sigma_grid=(0.1, 0.25, 0.5),
                     q_grid=(3.0, 5.0, 7.0),
                     noise_models=MODELS,
                     family="student_t"),
        "concentration": dict(kappa_grid=(1.0,),
                              sigma_grid=(1.0,),
                              q_grid=(None,),
                              noise_models=("additive",),
                              family="gaussian",
                              n_grid=(256, 512, 1024, 2048)),
        "custom": dict(),
    }
    if experiment not in presets:
        raise ValueError(f"unknown experiment {experiment!r}")
    kwargs = dict(presets[experiment])
    kwargs.update(overrides)
    return ExperimentPlan(experiment=experiment, **kwargs).validate()


def derive_seed(master_seed, *key):
    """Deterministic 64-bit seed from the master seed and integer coordinates."""
    ss = np.random.SeedSequence((int(master_seed),) + tuple(int(k) for k in key))
    return int(ss.generate_state(1, np.uint64)[0])


def run_trial(plan, cell):
    """Run the full pipeline for one grid cell and return its record.

    Solver non-convergence is converted into a failed-trial record (status
    ``failed:<error>``) so sweeps never abort.
    """
    t0 = time.perf_counter()
    cfg_key = (_CFG_TAG, cell.n_i, cell.kappa_i, cell.sigma_i, cell.q_i, cell.model_i)
    if not plan.fixed_config:
        cfg_key = cfg_key + (cell.trial,)
    xi_key = (_XI_TAG, cell.n_i, cell.kappa_i, cell.sigma_i, cell.q_i, cell.model_i,
              cell.trial)
    status = "ok"
    loss_rmse = loss_two_inf = loss_avg = opnorm_dev = math.nan
    clamped = 0
    try:
        config = sample_unit_ball(cell.n, plan.p, derive_seed(plan.master_seed, *cfg_key))
        if cell.kappa != 1.0:
            config = apply_condition_scaling(config, cell.kappa)
        delta = distance_matrix(config)
        dof = cell.q if plan.family == "student_t" else None
        xi_dist = XiDistribution(family=plan.family, dof=dof, scale=cell.sigma,
                                 mean_shift=plan.gamma)
        noise_spec = NoiseSpec(cell.model, xi_dist)
        xi = sample_xi_matrix(xi_dist, cell.n, derive_seed(plan.master_seed, *xi_key))
        observed = apply_noise_model(noise_spec, delta, xi)
        # the residual-spectrum diagnostic is not part of the record schema
        emb = classical_scaling(observed, plan.p, compute_residual_norm=False)
        clamped = emb.clamped_count
        res = optimal_rigid_alignment(emb.points, config.points)
        loss_rmse, loss_two_inf, loss_avg = res.loss_rmse, res.loss_two_inf, res.loss_avg
        # ||Dc - Deltac||_2 = ||double_center(D - Delta)||_2 by linearity
        opnorm_dev = spectral_norm(double_center(observed - delta),
                                   rel_tol=1e-9, max_iter=200, strict=False)
    except (NonConvergence, np.linalg.LinAlgError) as exc:
        status = f"failed:{type(exc).__name__}"
    wall_ms = (time.perf_counter() - t0) * 1000.0 if plan.timing else 0.0
    return TrialRecord(experiment=plan.experiment, n=cell.n, p=plan.p,
                       kappa=cell.kappa, sigma=cell.sigma, q=cell.q,
                       model=cell.model, trial=cell.trial, status=status,
                       loss_rmse=loss_rmse, loss_two_inf=loss_two_inf,
                       loss_avg=loss_avg, opnorm_dev=opnorm_dev,
                       clamped_count=clamped, wall_ms=wall_ms)


def run_experiment(plan):
    """Execute every grid cell, in parallel when requested.

    Output order and content depend only on (plan, master_seed), not on the
    worker count.
    """
    plan.validate()
    cells = list(plan.cells())
    if plan.parallelism > 1:
        return Parallel(n_jobs=plan.parallelism)(
            delayed(run_trial)(plan, cell) for cell in cells)
    return [run_trial(plan, cell) for cell in cells]


def ok_records(records):
    return [r for r in records if r.status == "ok"]


def failure_fraction(records):
    if not records:
        return 0.0
    return 1.0 - len(ok_records(records)) / len(records)


def group_records(records, keys=("kappa", "sigma", "q", "model")):
    """Split records into homogeneous groups by the given attributes."""
    groups = {}
    for r in records:
        groups.setdefault(tuple(getattr(r, k) for k in keys), []).append(r)
    return groups


def fit_loglog_slope(records, loss_field="loss_rmse"):
    """Least-squares slope of log(median loss) against log(n).

    Records must form one homogeneous group spanning at least three distinct
    n values.  Medians and the 10th/90th percentile band are computed per n
    across successful trials; for ``loss_two_inf`` the ratio of the median
    to sigma * sqrt(log(n)/n) is reported per n as well.
    """
    ok = [r for r in ok_records(records) if math.isfinite(getattr(r, loss_field))]
    by_n = {}
    for r in ok:
        by_n.setdefault(r.n, []).append(getattr(r, loss_field))
    ns = np.array(sorted(by_n))
    if ns.size < 3:
        raise InsufficientPoints(
            f"need >= 3 distinct n values for a rate fit, got {ns.size}")
    medians = np.array([np.median(by_n[n]) for n in ns])
    band_lo = np.array([np.percentile(by_n[n], 10) for n in ns])
    band_hi = np.array([np.percentile(by_n[n], 90) for n in ns])
    log_n = np.log(ns)
    log_med = np.log(medians)
    slope, intercept = np.polyfit(log_n, log_med, 1)
    pred = slope * log_n + intercept
    ss_res = float(np.sum((log_med - pred) ** 2))
    ss_tot = float(np.sum((log_med - log_med.mean()) ** 2))
    r_squared = 1.0 if ss_tot == 0 else 1.0 - ss_res / ss_tot
    comp = None
    if loss_field == "loss_two_inf":
        sigmas = {r.sigma for r in ok}
        if len(sigmas) == 1:
            sigma = sigmas.pop()
            if sigma > 0:
                comp = medians / (sigma * np.sqrt(np.log(ns) / ns))
    return RateFit(slope=float(slope), intercept=float(intercept),
                   r_squared=r_squared, n_values=ns, medians=medians,
                   band_lo=band_lo, band_hi=band_hi, comp_ratio=comp)


def _fmt(value):
    if value is None:
        return ""
    if isinstance(value, float):
        return f"{value:.17g}"
    return str(value)


def emit_csv(records, path):
    """Write records with the fixed schema; floats carry full precision."""
    fields = CSV_HEADER.split(",")
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write(CSV_HEADER + "\n")
        for r in records:
            fh.write(",".join(_fmt(getattr(r, f)) for f in fields) + "\n")


def parse_csv(path):
    """Inverse of :func:`emit_csv`."""
    records = []
    with open(path, "r", encoding="ascii") as fh:
        header = fh.readline().rstrip("\n")
        if header != CSV_HEADER:
            raise ValueError(f"{path}: unexpected CSV header")
        for line in fh:
            (experiment, n, p, kappa, sigma, q, model, trial, status, rmse,
             two_inf, avg, opnorm, clamped, wall) = line.rstrip("\n").split(",")
            records.append(TrialRecord(
                experiment=experiment, n=int(n), p=int(p), kappa=float(kappa),
                sigma=float(sigma), q=float(q) if q else None, model=model,
                trial=int(trial), status=status, loss_rmse=float(rmse),
                loss_two_inf=float(two_inf), loss_avg=float(avg),
                opnorm_dev=float(opnorm), clamped_count=int(clamped),
                wall_ms=float(wall)))
    return records


def concentration_profile(records):
    """Per-n median of opnorm_dev / sqrt(n) (the concentration check)."""
    by_n = {}
    for r in ok_records(records):
        if math.isfinite(r.opnorm_dev):
            by_n.setdefault(r.n, []).append(r.opnorm_dev / math.sqrt(r.n))
    return [(n, float(np.median(v))) for n, v in sorted(by_n.items())]

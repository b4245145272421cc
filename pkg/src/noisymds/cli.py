"""Command-line interface.

Subcommands: ``exp1``, ``exp2``, ``concentration`` (grid sweeps writing CSV
and optional SVG figures), ``embed`` (file-to-file classical scaling),
``align`` (losses between two configuration files), and ``packing-check``
(numeric verification of the lower-bound constructions).

Exit codes: 0 success, 2 invalid plan or arguments, 3 when more than half
of the trials in a sweep failed.
"""

import argparse
import json
import math
import sys
from pathlib import Path

from . import harness
from .alignment import optimal_rigid_alignment
from .configuration import apply_condition_scaling, check_membership, sample_unit_ball
from .lowerbound import (build_fano_family, build_lecam_family, make_packing_base,
                         tv_chi2_bound, varshamov_gilbert, verify_packing_properties)
from .matrixio import read_matrix, write_matrix
from .noise import MODELS
from .scaling import classical_scaling

PLAN_KEYS = ("n_grid", "p", "trials", "kappa_grid", "sigma_grid", "q_grid",
             "noise_models", "family", "gamma", "master_seed", "parallelism",
             "fixed_config", "timing")


def _int_list(text):
    return tuple(int(v) for v in text.split(",") if v)


def _float_list(text):
    return tuple(float(v) for v in text.split(",") if v)


def _model_list(text):
    if text.strip() == "all":
        return MODELS
    return tuple(v.strip() for v in text.split(",") if v.strip())


def _add_plan_flags(sp):
    sp.add_argument("--n-grid", type=_int_list, default=None, metavar="N1,N2,...")
    sp.add_argument("--p", type=int, default=None)
    sp.add_argument("--trials", type=int, default=None)
    sp.add_argument("--sigma-grid", type=_float_list, default=None, metavar="S1,S2,...")
    sp.add_argument("--kappa-grid", type=_float_list, default=None, metavar="K1,K2,...")
    sp.add_argument("--q-grid", type=_float_list, default=None, metavar="Q1,Q2,...")
    sp.add_argument("--models", type=_model_list, default=None,
                    metavar="MODEL1,MODEL2,... | all")
    sp.add_argument("--seed", type=int, default=None)
    sp.add_argument("--jobs", type=int, default=None)
    sp.add_argument("--out", type=Path, default=Path("out"))
    sp.add_argument("--format", choices=("csv", "svg", "both"), default="csv")
    sp.add_argument("--config", type=Path, default=None,
                    help="key=value file; values override flags")
    sp.add_argument("--fixed-config", action="store_true", default=None,
                    help="reuse one configuration per cell instead of resampling "
                         "each trial")
    sp.add_argument("--timing", action="store_true", default=None,
                    help="record real wall times (breaks byte-stable CSV output)")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="noisy-mds",
        description="Classical scaling under noisy dissimilarities: experiments, "
                    "embedding, alignment, and lower-bound checks.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, text in (("exp1", "condition-number sweep under additive t noise"),
                       ("exp2", "noise-model sweep"),
                       ("concentration", "operator-norm deviation sweep")):
        _add_plan_flags(sub.add_parser(name, help=text))

    embed = sub.add_parser("embed", help="classical scaling of a dissimilarity file")
    embed.add_argument("input", type=Path)
    embed.add_argument("output", type=Path)
    embed.add_argument("--p", type=int, required=True, help="embedding dimension")

    align = sub.add_parser("align", help="losses between two configuration files")
    align.add_argument("estimated", type=Path)
    align.add_argument("reference", type=Path)

    packing = sub.add_parser("packing-check",
                             help="verify the minimax packing constructions")
    packing.add_argument("--kind", choices=("fano", "lecam"), required=True)
    packing.add_argument("--n", type=int, default=64)
    packing.add_argument("--p", type=int, default=3)
    packing.add_argument("--kappa", type=float, default=1.5)
    packing.add_argument("--rx", type=float, default=5.0)
    packing.add_argument("--eta", type=float, default=0.05)
    packing.add_argument("--sigma", type=float, default=1.0)
    packing.add_argument("--seed", type=int, default=0)
    packing.add_argument("--out", type=Path, default=None,
                         help="directory for the CSV report (default: stdout)")
    return parser


def _parse_config_file(path):
    values = {}
    for raw in Path(path).read_text().splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"{path}: expected key=value, got {raw!r}")
        key, value = line.split("=", 1)
        values[key.strip()] = value.strip()
    return values


# config-file keys -> (plan field, parser); includes the noise-spec keys
# model/family/dof/sigma/gamma used by single-noise-spec runs
_CONFIG_PARSERS = {
    "n_grid": ("n_grid", _int_list),
    "p": ("p", int),
    "trials": ("trials", int),
    "sigma_grid": ("sigma_grid", _float_list),
    "kappa_grid": ("kappa_grid", _float_list),
    "q_grid": ("q_grid", _float_list),
    "models": ("noise_models", _model_list),
    "family": ("family", str),
    "gamma": ("gamma", float),
    "seed": ("master_seed", int),
    "jobs": ("parallelism", int),
    "fixed_config": ("fixed_config", lambda v: v.lower() in ("1", "true", "yes")),
    "timing": ("timing", lambda v: v.lower() in ("1", "true", "yes")),
    "model": ("noise_models", lambda v: (v,)),
    "dof": ("q_grid", lambda v: (float(v),)),
    "sigma": ("sigma_grid", lambda v: (float(v),)),
}


def _build_plan(args):
    overrides = {}
    flag_map = {"n_grid": args.n_grid, "p": args.p, "trials": args.trials,
                "sigma_grid": args.sigma_grid, "kappa_grid": args.kappa_grid,
                "q_grid": args.q_grid, "noise_models": args.models,
                "master_seed": args.seed, "parallelism": args.jobs,
                "fixed_config": args.fixed_config, "timing": args.timing}
    for key, value in flag_map.items():
        if value is not None:
            overrides[key] = value
    if args.config is not None:
        for key, raw in _parse_config_file(args.config).items():
            if key not in _CONFIG_PARSERS:
                raise ValueError(f"unknown config key {key!r}")
            field, parse = _CONFIG_PARSERS[key]
            overrides[field] = parse(raw)
    return harness.default_plan(args.command, **overrides)


def _report_kappa_fit(plan, out):
    """One membership line per kappa on a fresh max-n sample (no assertion)."""
    n = max(plan.n_grid)
    for kappa_i, kappa in enumerate(plan.kappa_grid):
        seed = harness.derive_seed(plan.master_seed, 909, kappa_i)
        config = sample_unit_ball(n, plan.p, seed)
        if kappa != 1.0:
            config = apply_condition_scaling(config, kappa)
        report = check_membership(config, max(kappa, 1.0 + 1e-9) * 1.01, r_x=2.0 * kappa)
        print(f"kappa={kappa:g}: kappa_fit={report.kappa_fit:.4f} "
              f"row_radius={report.row_radius:.4f}", file=out)


def _run_sweep(args):
    try:
        plan = _build_plan(args)
    except ValueError as exc:
        print(f"invalid plan: {exc}", file=sys.stderr)
        return 2
    records = harness.run_experiment(plan)
    args.out.mkdir(parents=True, exist_ok=True)
    csv_path = args.out / f"{plan.experiment}.csv"
    if args.format in ("csv", "both"):
        harness.emit_csv(records, csv_path)
        print(f"wrote {csv_path} ({len(records)} records)")
    if args.format in ("svg", "both"):
        _emit_plots(plan, records, args.out)
    if plan.experiment == "exp1":
        _report_kappa_fit(plan, sys.stdout)
    if plan.experiment == "concentration":
        for n, value in harness.concentration_profile(records):
            print(f"n={n}: median opnorm_dev/sqrt(n) = {value:.4f}")
    failed = harness.failure_fraction(records)
    if failed > 0.5:
        print(f"{failed:.0%} of trials failed", file=sys.stderr)
        return 3
    return 0


def _emit_plots(plan, records, out_dir):
    from .plotting import emit_svg_plot  # matplotlib import deferred

    for loss_field, slope in (("loss_rmse", -0.5), ("loss_two_inf", -0.5)):
        groups = {}
        for key, group in sorted(harness.group_records(records).items()):
            try:
                fit = harness.fit_loglog_slope(group, loss_field)
            except Exception:
                continue
            kappa, sigma, q, model = key
            label = f"kappa={kappa:g} sigma={sigma:g} q={q if q is not None else '-'} {model}"
            groups[label] = fit
        if not groups:
            print(f"not enough data to plot {loss_field}", file=sys.stderr)
            continue
        path = out_dir / f"{plan.experiment}_{loss_field}.svg"
        emit_svg_plot(groups, path, reference_slope=slope, ylabel=loss_field)
        print(f"wrote {path}")


def _run_embed(args):
    D = read_matrix(args.input)
    emb = classical_scaling(D, args.p)
    write_matrix(args.output, emb.points)
    diagnostics = {
        "n": int(emb.points.shape[0]),
        "p": int(args.p),
        "eigenvalues": [float(v) for v in emb.eigenvalues],
        "clamped_count": emb.clamped_count,
        "residual_spectrum_norm": (None if math.isnan(emb.residual_spectrum_norm)
                                   else emb.residual_spectrum_norm),
    }
    print(json.dumps(diagnostics))
    return 0


def _run_align(args):
    result = optimal_rigid_alignment(read_matrix(args.estimated),
                                     read_matrix(args.reference))
    print(f"{result.loss_rmse:.17g},{result.loss_two_inf:.17g},"
          f"{result.loss_avg:.17g}")
    return 0


def _run_packing_check(args):
    if args.kind == "lecam" and args.n % 2 != 0:
        print("lecam families need even n (antipodal base)", file=sys.stderr)
        return 2
    base = make_packing_base(args.n, args.p, args.kappa, args.rx, args.seed)
    if args.kind == "fano":
        m = args.n // 2
        code = varshamov_gilbert(m, min_sep=max(1, math.ceil(m / 8)),
                                 seed=args.seed + 1)
        v = [1.0] + [0.0] * (args.p - 1)
        family = build_fano_family(base.points, args.eta, v, code)
    else:
        family = build_lecam_family(base.points, args.eta)
    report = verify_packing_properties(family, args.kappa, args.rx)
    lines = ["kind,check,member,measured,bound,passed"]
    for c in report.checks:
        lines.append(f"{c.kind},{c.check},{c.member},{c.measured:.17g},"
                     f"{c.bound:.17g},{str(c.passed).lower()}")
    if args.kind == "lecam":
        raw = tv_chi2_bound(family, args.sigma)
        lines.append(f"lecam,tv_chi2_raw,all,{raw:.17g},nan,true")
        lines.append(f"lecam,tv_chi2_clamped,all,{min(raw, 1.0):.17g},1,true")
    text = "\n".join(lines) + "\n"
    if args.out is not None:
        args.out.mkdir(parents=True, exist_ok=True)
        path = args.out / f"packing_{args.kind}.csv"
        path.write_text(text)
        print(f"wrote {path}")
    else:
        sys.stdout.write(text)
    if not report.all_passed:
        failed = report.failures()
        print(f"{len(failed)} packing check(s) failed", file=sys.stderr)
        return 1
    return 0


def main(argv=None):
    args = build_parser().parse_args(argv)
    if args.command in ("exp1", "exp2", "concentration"):
        return _run_sweep(args)
    if args.command == "embed":
        return _run_embed(args)
    if args.command == "align":
        return _run_align(args)
    return _run_packing_check(args)


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
